#include "widthslab/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "widthslab/kernels.hpp"

namespace widthslab {

ChebyshevResult chebyshev_center(SectionOracle& section, std::size_t dim) {
  ChebyshevResult out;
  out.center.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    auto [lo, hi] = section.extrema(static_cast<int>(i));
    out.center[i] = 0.5 * (lo + hi);
    out.radius = std::max(out.radius, 0.5 * (hi - lo));
  }
  return out;
}

Vec recover(const FunctionClass& F, const SampleDesign& design, const Vec& y) {
  design.validate(F.dim());
  if (y.size() != design.size())
    throw DimensionError("sample vector length does not match the design");
  SectionOracle sec(F, design, y);
  if (!sec.feasible()) return Vec(F.dim(), 0.0);
  return chebyshev_center(sec, F.dim()).center;
}

namespace {

bool next_combination(std::vector<int>& c, int m) {
  const int n = static_cast<int>(c.size());
  for (int i = n - 1; i >= 0; --i) {
    if (c[i] < m - n + i) {
      ++c[i];
      for (int j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

DiameterResult exhaustive_search(const FunctionClass& F, int n,
                                 std::uint64_t budget) {
  const int m = static_cast<int>(F.dim());
  const std::uint64_t total = binomial_capped(m, n, budget);
  if (total > budget) {
    std::ostringstream os;
    os << "design space C(" << m << "," << n << ") exceeds budget " << budget
       << "; pass a larger budget or use the greedy search";
    throw BudgetError(os.str());
  }

  DiameterResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> c(n);
  for (int i = 0; i < n; ++i) c[i] = i;
  bool more = true;
  while (more) {
    SampleDesign d(c);
    double v = pair_diameter(F, d);
    ++best.designs_tried;
    if (v < best.value) {
      best.value = v;
      best.design = d;
    }
    more = n > 0 && next_combination(c, m);
  }
  best.witness = pair_diameter_witness(F, best.design);
  return best;
}

DiameterResult greedy_search(const FunctionClass& F, int n) {
  const int m = static_cast<int>(F.dim());
  DiameterResult out;
  out.heuristic = true;
  SampleDesign d;
  double current = pair_diameter(F, d);
  for (int step = 0; step < n; ++step) {
    double bestv = std::numeric_limits<double>::infinity();
    int bestx = -1;
    for (int x = 0; x < m; ++x) {
      if (d.contains(x)) continue;
      double v = pair_diameter(F, d.with(x));
      ++out.designs_tried;
      if (v < bestv) {
        bestv = v;
        bestx = x;
      }
    }
    if (bestx < 0) break;
    d = d.with(bestx);
    current = bestv;
  }
  out.value = current;
  out.design = d;
  out.witness = pair_diameter_witness(F, d);
  return out;
}

// A quasinorm ball with diagonal map shrinks to zero on every coordinate a
// design pins: a member supported on two coordinates already pays more than
// the unit budget unless one of them carries almost nothing. The widest pair
// agreeing on the design is therefore the signed spike on the largest free
// diagonal entry.
const PBall* diagonal_ball(const FunctionClass& F) {
  const PBall* pb = std::get_if<PBall>(&F.body());
  return pb && effectively_diagonal(pb->map) ? pb : nullptr;
}

DiameterResult diagonal_ball_diameter(const FunctionClass& F, const PBall& pb,
                                      int n) {
  const int m = static_cast<int>(F.dim());
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::fabs(pb.map(a, a)) > std::fabs(pb.map(b, b));
  });
  DiameterResult out;
  out.designs_tried = 1;
  const int pinned = std::min(n, m);
  std::vector<int> idx(order.begin(), order.begin() + pinned);
  out.design = SampleDesign(std::move(idx));
  if (pinned < m) {
    const int coord = order[pinned];
    out.witness.coord = coord;
    out.witness.f.assign(m, 0.0);
    out.witness.f[coord] = pb.map(coord, coord);
    out.witness.g.assign(m, 0.0);
    out.witness.g[coord] = -pb.map(coord, coord);
    out.witness.gap = 2.0 * std::fabs(pb.map(coord, coord));
  } else {
    out.witness.f.assign(m, 0.0);
    out.witness.g.assign(m, 0.0);
  }
  out.value = out.witness.gap;
  return out;
}

}  // namespace

DiameterResult diameter_of_information(const FunctionClass& F, int n,
                                       std::uint64_t budget, bool heuristic) {
  if (n < 0) throw ParameterError("sample count must be nonnegative");
  if (const PBall* pb = diagonal_ball(F))
    return diagonal_ball_diameter(F, *pb, n);
  const int m = static_cast<int>(F.dim());
  if (n >= m) {
    DiameterResult out;
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    out.design = SampleDesign(std::move(all));
    out.value = pair_diameter(F, out.design);
    out.witness = pair_diameter_witness(F, out.design);
    out.designs_tried = 1;
    return out;
  }
  return heuristic ? greedy_search(F, n) : exhaustive_search(F, n, budget);
}

DiameterResult sampling_number(const FunctionClass& F, int n,
                               std::uint64_t budget, bool heuristic) {
  DiameterResult r = diameter_of_information(F, n, budget, heuristic);
  r.value *= 0.5;
  return r;
}

ProbeResult recovery_error_probe(const FunctionClass& F,
                                 const SampleDesign& design, int trials,
                                 std::uint64_t seed) {
  if (trials <= 0) throw ParameterError("probe needs a positive trial count");
  design.validate(F.dim());
  PointSampler sampler(F, seed);
  ProbeResult out;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec f = sampler.draw();
    Vec y(design.size());
    for (std::size_t j = 0; j < design.size(); ++j)
      y[j] = f[design.indices[j]];
    SectionOracle sec(F, design, std::move(y));
    if (!sec.feasible())
      throw SolverError(
          "probe section came back empty for a sampled member; the sampler "
          "and the membership description disagree");
    auto cheb = chebyshev_center(sec, F.dim());
    double err = kernels::linf_dist(f.data(), cheb.center.data(), F.dim());
    out.max_error = std::max(out.max_error, err);
    sum += err;
    ++out.trials;
  }
  out.mean_error = sum / out.trials;
  return out;
}

}  // namespace widthslab

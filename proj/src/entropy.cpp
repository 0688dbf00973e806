#include "widthslab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "widthslab/kernels.hpp"

namespace widthslab {
namespace {

constexpr std::uint64_t kNetCap = 10000000;      // grid hull points
constexpr std::uint64_t kFlatCap = 24000000;     // doubles held at once
constexpr double kDefaultWeightMesh = 0.05;      // aims at 5% sup-norm slack

// The vertex weight grid: all hull points with weights that are multiples
// of 1/t. Every class member is within delta of the net in sup norm, since
// a weight vector rounds onto the grid within k/(2t) in l1 and the vertices
// have sup norm at most max_norm.
struct WeightNet {
  std::vector<double> flat;
  std::size_t count = 0;
  std::size_t m = 0;
  double delta = 0.0;
  double mesh = 0.0;  // realized l1 resolution k/(2t)
};

std::uint64_t grid_size(std::uint64_t t, std::uint64_t k) {
  return binomial_capped(t + k - 1, k - 1, kNetCap);
}

WeightNet build_weight_net(const FunctionClass& F, double mesh) {
  const VPolytope* vv = F.vertex_view();
  if (!vv)
    throw UnsupportedClassError(
        "net covering needs a vertex description of the class");
  const Matrix& V = vv->vertices;
  const std::size_t m = F.dim();
  if (m > 16)
    throw ParameterError("net covering supports dimensions up to 16");
  const std::size_t k = V.rows();
  double max_norm = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    max_norm = std::max(max_norm, kernels::max_abs(V.row(i), m));

  std::uint64_t t;
  if (mesh > 0.0) {
    t = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(k) / (2.0 * mesh)));
    if (t < 1) t = 1;
    if (grid_size(t, k) > kNetCap || grid_size(t, k) * m > kFlatCap)
      throw BudgetError(
          "the weight grid for this mesh is too large; pass a coarser mesh");
  } else {
    std::uint64_t target = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(k) / (2.0 * kDefaultWeightMesh)));
    t = 1;
    while (t < target && grid_size(t + 1, k) <= kNetCap &&
           grid_size(t + 1, k) * m <= kFlatCap)
      ++t;
  }

  const std::uint64_t expect = grid_size(t, k);
  WeightNet net;
  net.m = m;
  net.mesh = static_cast<double>(k) / (2.0 * static_cast<double>(t));
  net.delta = net.mesh * max_norm;
  net.flat.reserve(static_cast<std::size_t>(expect) * m);

  // Enumerate compositions of t into k parts: move a unit from the first
  // nonzero slot rightwards, dumping the remainder back at the front.
  std::vector<std::uint64_t> c(k, 0);
  c[0] = t;
  while (true) {
    const std::size_t base = net.flat.size();
    net.flat.resize(base + m, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      if (c[i] != 0)
        kernels::axpy(static_cast<double>(c[i]) / static_cast<double>(t),
                      V.row(i), net.flat.data() + base, m);
    ++net.count;
    std::size_t j = 0;
    while (c[j] == 0) ++j;
    if (j == k - 1) break;
    const std::uint64_t v = c[j];
    c[j] = 0;
    c[j + 1] += 1;
    c[0] = v - 1;
  }
  if (net.count != expect)
    throw SolverError("weight grid enumeration lost points");
  return net;
}

double dist_to_centers(const std::vector<Vec>& centers, const double* pt,
                       std::size_t m) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& c : centers)
    best = std::min(best, kernels::linf_dist(c.data(), pt, m));
  return best;
}

// Exact 1-center of a point set in sup norm: the bounding box midpoint.
Vec bbox_midpoint(const std::vector<double>& flat,
                  const std::vector<std::size_t>& idx, std::size_t m) {
  Vec lo(m, std::numeric_limits<double>::infinity());
  Vec hi(m, -std::numeric_limits<double>::infinity());
  for (std::size_t i : idx) {
    const double* p = flat.data() + i * m;
    for (std::size_t d = 0; d < m; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  Vec mid(m, 0.0);
  for (std::size_t d = 0; d < m; ++d) mid[d] = 0.5 * (lo[d] + hi[d]);
  return mid;
}

struct KCenterResult {
  std::vector<Vec> centers;
  double radius = 0.0;
};

KCenterResult kcenter_on_net(const WeightNet& net, std::size_t K) {
  const std::size_t count = net.count;
  const std::size_t m = net.m;

  std::vector<std::size_t> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = i;
  std::vector<double> dist(count);
  std::vector<std::size_t> owner(count, 0);

  auto complete_and_refine = [&](std::vector<Vec> centers) {
    std::fill(dist.begin(), dist.end(),
              std::numeric_limits<double>::infinity());
    for (const Vec& c : centers)
      kernels::min_update_linf(net.flat.data(), count, m, c.data(),
                               dist.data());
    while (centers.size() < K) {
      std::size_t far = kernels::argmax(dist.data(), count);
      if (!(dist[far] > 0.0)) break;  // everything already covered exactly
      centers.emplace_back(net.flat.data() + far * m,
                           net.flat.data() + (far + 1) * m);
      kernels::min_update_linf(net.flat.data(), count, m,
                               centers.back().data(), dist.data());
    }
    KCenterResult best;
    best.centers = centers;
    best.radius = dist[kernels::argmax(dist.data(), count)];

    // Alternate assignment and exact per-cluster 1-centers, keeping the best
    // placement seen. Iteration count backs off on huge nets.
    const double work = static_cast<double>(count) * centers.size() * m;
    int rounds = work > 2e8 ? 8 : 48;
    for (int it = 0; it < rounds; ++it) {
      for (std::size_t i = 0; i < count; ++i) {
        const double* p = net.flat.data() + i * m;
        double bd = std::numeric_limits<double>::infinity();
        std::size_t ba = 0;
        for (std::size_t a = 0; a < centers.size(); ++a) {
          double d = kernels::linf_dist(centers[a].data(), p, m);
          if (d < bd) {
            bd = d;
            ba = a;
          }
        }
        owner[i] = ba;
      }
      std::vector<std::vector<std::size_t>> clusters(centers.size());
      for (std::size_t i = 0; i < count; ++i) clusters[owner[i]].push_back(i);
      for (std::size_t a = 0; a < centers.size(); ++a)
        if (!clusters[a].empty())
          centers[a] = bbox_midpoint(net.flat, clusters[a], m);
      double radius = 0.0;
      for (std::size_t i = 0; i < count; ++i)
        radius = std::max(
            radius, dist_to_centers(centers, net.flat.data() + i * m, m));
      if (radius < best.radius - 1e-15) {
        best.centers = centers;
        best.radius = radius;
      } else {
        break;
      }
    }
    return best;
  };

  // The global midpoint is the exact 1-center but can trap refinement in a
  // hub-and-spokes layout; a second pass growing from the first net point
  // starts extremal instead. Both are deterministic.
  KCenterResult a = complete_and_refine({bbox_midpoint(net.flat, all, m)});
  if (K < 2 || a.radius == 0.0) return a;
  KCenterResult b = complete_and_refine(
      {Vec(net.flat.data(), net.flat.data() + m)});
  return b.radius < a.radius ? b : a;
}

double exact_separation(const std::vector<Vec>& pts) {
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      sep = std::min(sep,
                     kernels::linf_dist(pts[i].data(), pts[j].data(),
                                        pts[i].size()));
  return pts.size() < 2 ? 0.0 : sep;
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t r = comb.size();
  std::size_t i = r;
  while (i > 0) {
    --i;
    if (comb[i] != i + n - r) {
      ++comb[i];
      for (std::size_t j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SeparatedFamily greedy_packing(const FunctionClass& F, std::size_t count,
                               std::uint64_t seed, int refine_iters,
                               const std::vector<Vec>& extra_candidates) {
  if (count < 2) throw ParameterError("a packing needs at least 2 points");
  if (count > 65536)
    throw BudgetError("packings beyond 65536 points are not supported");
  const std::size_t m = F.dim();
  const double tol = 1e-6 * std::max(1.0, F.radius());

  PointSampler sampler(F, seed);
  std::vector<Vec> pool = sampler.extreme_points();
  for (const Vec& v : extra_candidates) {
    if (v.size() != m)
      throw DimensionError("candidate point length does not match the class");
    if (member(F, v, tol)) pool.push_back(v);
  }
  const std::size_t draws = std::max<std::size_t>(256, 16 * count);
  for (std::size_t i = 0; i < draws; ++i) pool.push_back(sampler.draw());

  const std::size_t psz = pool.size();
  std::vector<double> flat(psz * m);
  for (std::size_t i = 0; i < psz; ++i)
    std::copy(pool[i].begin(), pool[i].end(), flat.begin() + i * m);

  // Farthest point greedy, seeded with the largest point.
  std::vector<double> norms(psz);
  for (std::size_t i = 0; i < psz; ++i)
    norms[i] = kernels::max_abs(flat.data() + i * m, m);
  std::vector<std::size_t> chosen;
  chosen.push_back(kernels::argmax(norms.data(), psz));
  std::vector<double> dist(psz, std::numeric_limits<double>::infinity());
  kernels::min_update_linf(flat.data(), psz, m,
                           flat.data() + chosen.back() * m, dist.data());
  while (chosen.size() < std::min(count, psz)) {
    chosen.push_back(kernels::argmax(dist.data(), psz));
    kernels::min_update_linf(flat.data(), psz, m,
                             flat.data() + chosen.back() * m, dist.data());
  }

  SeparatedFamily fam;
  fam.membership_tol = tol;
  for (std::size_t idx : chosen) fam.points.push_back(pool[idx]);
  fam.separation = exact_separation(fam.points);

  // Exchange refinement: rebuild the point of the closest pair from the
  // pool whenever that widens the minimum gap.
  for (int it = 0; it < refine_iters; ++it) {
    std::size_t pa = 0, pb = 1;
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fam.points.size(); ++i)
      for (std::size_t j = i + 1; j < fam.points.size(); ++j) {
        double d = kernels::linf_dist(fam.points[i].data(),
                                      fam.points[j].data(), m);
        if (d < sep) {
          sep = d;
          pa = i;
          pb = j;
        }
      }
    bool improved = false;
    for (std::size_t victim : {pa, pb}) {
      std::size_t best_idx = psz;
      double best_d = sep + 1e-12;
      for (std::size_t cand = 0; cand < psz; ++cand) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < fam.points.size(); ++j) {
          if (j == victim) continue;
          d = std::min(d, kernels::linf_dist(flat.data() + cand * m,
                                             fam.points[j].data(), m));
          if (d <= best_d) break;
        }
        if (d > best_d) {
          best_d = d;
          best_idx = cand;
        }
      }
      if (best_idx != psz) {
        fam.points[victim] = pool[best_idx];
        fam.separation = exact_separation(fam.points);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return fam;
}

CoveringCertificate net_cover_upper(const FunctionClass& F, int n,
                                    double mesh) {
  if (n < 0) throw ParameterError("the ball budget exponent must be >= 0");
  WeightNet net = build_weight_net(F, mesh);
  CoveringCertificate cert;
  cert.net_mesh = net.mesh;
  cert.net_size = net.count;

  const std::size_t K =
      n >= 24 ? std::numeric_limits<std::size_t>::max()
              : (std::size_t{1} << n);
  if (K >= net.count) {
    for (std::size_t i = 0; i < net.count; ++i)
      cert.centers.emplace_back(net.flat.data() + i * net.m,
                                net.flat.data() + (i + 1) * net.m);
    cert.radius = net.delta;
    return cert;
  }
  KCenterResult kc = kcenter_on_net(net, K);
  cert.centers = std::move(kc.centers);
  cert.radius = kc.radius + net.delta;
  return cert;
}

CertifiedInterval entropy_interval(const FunctionClass& F, int n,
                                   const EntropyOptions& opts) {
  if (n < 0) throw ParameterError("the ball budget exponent must be >= 0");
  if (n > 16) throw BudgetError("packing sizes beyond 2^16 are unsupported");
  const std::size_t count = (std::size_t{1} << n) + 1;
  SeparatedFamily fam = greedy_packing(F, count, opts.seed, opts.refine_iters,
                                       opts.extra_candidates);
  const double lo = 0.5 * fam.separation;

  double hi;
  std::string hi_method;
  if (F.vertex_view() && F.dim() <= 16) {
    CoveringCertificate cert = net_cover_upper(F, n, opts.mesh);
    hi = cert.radius;
    hi_method = "net-kcenter";
  } else {
    // One box center covers the class within the largest half width, so
    // this stays a valid (if crude) upper bound for every n.
    hi = 0.0;
    for (std::size_t i = 0; i < F.dim(); ++i) {
      Vec e(F.dim(), 0.0);
      e[i] = 1.0;
      double splus = support(F, e).value;
      e[i] = -1.0;
      double sminus = support(F, e).value;
      hi = std::max(hi, 0.5 * (splus + sminus));
    }
    hi_method = "bbox-center";
  }
  return certified_interval(lo, hi, "greedy-packing", hi_method);
}

double exact_small_entropy(const FunctionClass& F, int n,
                           const std::vector<Vec>& candidate_grid,
                           double mesh) {
  if (n < 0) throw ParameterError("the ball budget exponent must be >= 0");
  if (n > 3)
    throw ParameterError("exhaustive center search stops at 2^n <= 8");
  if (candidate_grid.size() > 20)
    throw ParameterError("exhaustive center search allows at most 20 "
                         "candidate centers");
  WeightNet net = build_weight_net(F, mesh);
  const std::size_t K = std::size_t{1} << n;
  if (K >= net.count) return net.delta;
  if (candidate_grid.empty())
    throw ParameterError("exhaustive center search needs candidate centers");
  for (const Vec& c : candidate_grid)
    if (c.size() != net.m)
      throw DimensionError("candidate center length does not match the class");

  const std::size_t pick = std::min(K, candidate_grid.size());
  const std::uint64_t subsets =
      binomial_capped(candidate_grid.size(), pick, 1000000);
  if (subsets * net.count * pick > 2000000000ull)
    throw BudgetError("exhaustive center search is too large; coarsen the "
                      "mesh or shrink the grid");

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> comb(pick);
  for (std::size_t i = 0; i < pick; ++i) comb[i] = i;
  do {
    double radius = 0.0;
    for (std::size_t i = 0; i < net.count && radius < best; ++i) {
      const double* p = net.flat.data() + i * net.m;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t ci : comb)
        d = std::min(d, kernels::linf_dist(candidate_grid[ci].data(), p,
                                           net.m));
      radius = std::max(radius, d);
    }
    best = std::min(best, radius);
  } while (next_combination(comb, candidate_grid.size()));
  return best + net.delta;
}

}  // namespace widthslab

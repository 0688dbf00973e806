#include "widthslab/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "widthslab/kernels.hpp"

namespace widthslab {
namespace {

int lowest_free(const SampleDesign& d, int m) {
  for (int x = 0; x < m; ++x)
    if (!d.contains(x)) return x;
  throw SolverError("no free coordinate left for the transcript");
}

}  // namespace

Transcript build_transcript(const FunctionClass& F, int n, double delta) {
  if (!(delta > 0.0))
    throw ParameterError("transcript slack must be positive");
  if (n < 0) throw ParameterError("transcript depth must be nonnegative");
  const int m = static_cast<int>(F.dim());
  if (n + 1 > m)
    throw ParameterError("transcript depth needs n + 1 <= dim");

  Transcript t;
  t.delta = delta;
  t.p = F.pexp();

  const PBall* pb = std::get_if<PBall>(&F.body());
  const bool diagonal = pb && effectively_diagonal(pb->map);
  if (pb && !diagonal && !F.convex())
    throw UnsupportedClassError(
        "transcripts over sub-1 ball exponents need a diagonal map");

  const double exhausted = 1e-12 * std::max(1.0, F.radius());
  SampleDesign d;
  t.rho = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    TranscriptStep step;
    step.design = d;
    if (diagonal) {
      // The widest pair agreeing on the design is the signed spike on the
      // largest free diagonal entry; anything off that axis costs budget
      // without separating.
      int node = -1;
      double best = -1.0;
      for (int x = 0; x < m; ++x) {
        if (d.contains(x)) continue;
        double v = std::fabs(pb->map(x, x));
        if (v > best) {
          best = v;
          node = x;
        }
      }
      step.node = node;
      step.f.assign(m, 0.0);
      step.g.assign(m, 0.0);
      step.f[node] = pb->map(node, node);
      step.g[node] = -pb->map(node, node);
      step.gap = 2.0 * best;
      if (best <= exhausted) t.vacuous = true;
    } else {
      PairWitness w = pair_diameter_witness(F, d);
      Vec dabs(m, 0.0);
      for (int x = 0; x < m; ++x) dabs[x] = std::fabs(w.f[x] - w.g[x]);
      for (int x : d.indices) dabs[x] = 0.0;
      int node = static_cast<int>(kernels::argmax(dabs.data(), m));
      if (dabs[node] <= exhausted) {
        t.vacuous = true;
        node = lowest_free(d, m);
      }
      step.node = node;
      step.f = std::move(w.f);
      step.g = std::move(w.g);
      step.gap = dabs[node];
    }
    t.rho = std::min(t.rho, step.gap);
    t.nodes.push_back(step.node);
    d = d.with(step.node);
    t.steps.push_back(std::move(step));
  }
  t.final_design = d;
  return t;
}

SeparatedFamily build_separated_family(const FunctionClass& F,
                                       const Transcript& t) {
  if (t.steps.empty()) throw ParameterError("transcript has no steps");
  if (F.pexp() != t.p)
    throw ParameterError(
        "class exponent changed since the transcript was built");
  const std::size_t depth = t.steps.size();
  if (depth > 13)
    throw BudgetError("blend families beyond 2^13 points are unsupported");
  const std::size_t m = F.dim();
  const double scale = std::pow(static_cast<double>(depth), -1.0 / t.p);

  SeparatedFamily fam;
  fam.membership_tol = 1e-6 * std::max(1.0, F.radius());
  const std::size_t total = std::size_t{1} << depth;
  fam.points.assign(total, Vec(m, 0.0));
  for (std::size_t xi = 0; xi < total; ++xi) {
    Vec& h = fam.points[xi];
    for (std::size_t i = 0; i < depth; ++i) {
      const Vec& pick = ((xi >> i) & 1u) ? t.steps[i].f : t.steps[i].g;
      kernels::axpy(scale, pick.data(), h.data(), m);
    }
  }
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < total; ++a)
    for (std::size_t b = a + 1; b < total; ++b)
      sep = std::min(sep, kernels::linf_dist(fam.points[a].data(),
                                             fam.points[b].data(), m));
  fam.separation = sep;
  return fam;
}

SeparationReport verify_separation(const Transcript& t,
                                   const SeparatedFamily& fam) {
  const std::size_t depth = t.steps.size();
  if (depth == 0 || depth > 13 ||
      fam.points.size() != (std::size_t{1} << depth))
    throw ParameterError("family size does not match the transcript");
  const std::size_t m = fam.points.front().size();
  const double scale = std::pow(static_cast<double>(depth), -1.0 / t.p);

  SeparationReport rep;
  rep.vacuous = t.vacuous;
  rep.required = (t.rho - t.delta) * scale;

  // Later pairs agree on earlier nodes; that is what makes their blend
  // contributions cancel at x_k.
  for (std::size_t k = 0; k < depth; ++k) {
    const int xk = t.nodes[k];
    for (std::size_t i = k + 1; i < depth; ++i)
      rep.agreement_error =
          std::max(rep.agreement_error,
                   std::fabs(t.steps[i].f[xk] - t.steps[i].g[xk]));
  }

  // Two blends first differing in bit k sit exactly gap_k * scale apart at
  // node x_k, and at least that far apart overall.
  double min_sep = std::numeric_limits<double>::infinity();
  const std::size_t total = fam.points.size();
  for (std::size_t a = 0; a < total; ++a)
    for (std::size_t b = a + 1; b < total; ++b) {
      const std::size_t k = static_cast<std::size_t>(
          __builtin_ctzll(static_cast<unsigned long long>(a ^ b)));
      const int xk = t.nodes[k];
      const double actual =
          std::fabs(fam.points[a][xk] - fam.points[b][xk]);
      rep.telescope_error = std::max(
          rep.telescope_error, std::fabs(actual - t.steps[k].gap * scale));
      min_sep = std::min(min_sep, kernels::linf_dist(fam.points[a].data(),
                                                     fam.points[b].data(),
                                                     m));
    }
  rep.min_separation = min_sep;
  if (rep.vacuous) {
    rep.pass = true;
    return rep;
  }
  rep.pass = rep.min_separation >= rep.required - 1e-8 &&
             rep.telescope_error <= 1e-8 && rep.agreement_error <= 1e-8;
  return rep;
}

TheoremReport verify_main_inequality(const FunctionClass& F, int n,
                                     const VerifyOptions& opts) {
  TheoremReport rep;
  rep.n = n;
  rep.heuristic = opts.heuristic;
  rep.p = F.pexp();

  rep.transcript = build_transcript(F, n, opts.delta);
  rep.family = build_separated_family(F, rep.transcript);
  rep.separation = verify_separation(rep.transcript, rep.family);

  rep.membership_tol = rep.family.membership_tol;
  for (const TranscriptStep& s : rep.transcript.steps) {
    rep.membership_violation =
        std::max(rep.membership_violation, member_violation(F, s.f));
    rep.membership_violation =
        std::max(rep.membership_violation, member_violation(F, s.g));
  }
  for (const Vec& h : rep.family.points)
    rep.membership_violation =
        std::max(rep.membership_violation, member_violation(F, h));
  rep.membership_ok = rep.membership_violation <= rep.membership_tol;

  rep.info_diameter =
      diameter_of_information(F, n, opts.budget, opts.heuristic);
  rep.sampling = 0.5 * rep.info_diameter.value;

  EntropyOptions eo;
  eo.seed = opts.seed;
  eo.refine_iters = opts.refine_iters;
  eo.mesh = opts.mesh;
  eo.extra_candidates = rep.family.points;
  rep.eps = entropy_interval(F, n, eo);

  // The blend family is itself a packing: 2^(n+1) verified members with the
  // reported separation, more than the 2^n + 1 points the inner entropy
  // needs. Its half-separation is then a sound lower bound whether or not
  // the greedy packing rediscovers it.
  if (!rep.transcript.vacuous && rep.membership_ok &&
      rep.family.points.size() >= (std::size_t{1} << n) + 1) {
    const double fam_lo = 0.5 * rep.family.separation;
    if (fam_lo > rep.eps.lo)
      rep.eps = certified_interval(std::min(fam_lo, rep.eps.hi), rep.eps.hi,
                                   "blend-family", rep.eps.hi_method);
  }

  const double q = std::pow(n + 1.0, 1.0 / rep.p);
  rep.upper_rhs = q * rep.eps.hi;
  rep.upper_ok = rep.sampling <= rep.upper_rhs + 1e-6;
  rep.lower_required = (rep.info_diameter.value - opts.delta) / (2.0 * q);
  rep.lower_ok = rep.eps.lo >= rep.lower_required - 1e-8;
  rep.pass = rep.separation.pass && rep.membership_ok && rep.upper_ok &&
             rep.lower_ok;
  return rep;
}

}  // namespace widthslab

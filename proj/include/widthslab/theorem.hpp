#pragma once

#include <cstdint>
#include <vector>

#include "widthslab/entropy.hpp"
#include "widthslab/geometry.hpp"
#include "widthslab/recovery.hpp"

// Constructive bridge from sampling to entropy: grow a nested design one
// worst-case node at a time, keep the extremal pair at each step, and blend
// the pairs into a separated family of 2^(n+1) class members. The family
// certifies a lower bound on entropy which the sampling number must respect.

namespace widthslab {

struct TranscriptStep {
  SampleDesign design;  // nodes pinned before this step
  Vec f, g;             // extremal pair agreeing on `design`
  int node = 0;         // coordinate where |f - g| peaks; pinned afterwards
  double gap = 0.0;     // |f - g| at `node`, equals the sup-norm gap
};

struct Transcript {
  std::vector<TranscriptStep> steps;  // n + 1 steps for depth n
  std::vector<int> nodes;             // pick order of the pinned coordinates
  SampleDesign final_design;          // the same nodes, sorted
  double rho = 0.0;    // smallest step gap; every step separates this much
  double delta = 0.0;  // numerical slack the guarantees are stated with
  double p = 1.0;      // blend exponent the class reported at build time
  bool vacuous = false;  // a step ran out of gap; nothing is guaranteed
};

/// Runs the induction for depth n (needs n + 1 <= dim and delta > 0).
/// Convex bodies take the extremal pair from the agreement program; sub-1
/// ball exponents use the exact signed-axis pairs and require a diagonal
/// map. Ties in the node pick go to the lowest coordinate.
Transcript build_transcript(const FunctionClass& F, int n,
                            double delta = 1e-9);

/// h_xi = (n+1)^(-1/p) * sum_i (xi_i f_i + (1 - xi_i) g_i), xi running over
/// all bit patterns (bit i of the point index is xi_i). Throws
/// ParameterError when the class exponent no longer matches the transcript,
/// BudgetError past 2^13 points.
SeparatedFamily build_separated_family(const FunctionClass& F,
                                       const Transcript& t);

struct SeparationReport {
  double min_separation = 0.0;
  double required = 0.0;        // (rho - delta) / (n+1)^(1/p)
  double telescope_error = 0.0;  // worst |pair distance at node - gap*scale|
  double agreement_error = 0.0;  // worst |f_i - g_i| at an earlier node
  bool vacuous = false;
  bool pass = false;
};

/// Re-derives the separation the family must have from the transcript: two
/// blends first differing in bit k sit exactly gap_k * scale apart at node
/// x_k, because earlier pairs contribute identical terms and later pairs
/// agree at x_k. Checks that identity, the agreement it rests on, and the
/// resulting minimum separation. A vacuous transcript passes trivially.
SeparationReport verify_separation(const Transcript& t,
                                   const SeparatedFamily& fam);

struct VerifyOptions {
  std::uint64_t budget = 100000;  // exhaustive design search cap
  bool heuristic = false;         // greedy design growth instead
  std::uint64_t seed = 1;
  double mesh = 0.0;  // covering grid resolution, <= 0 = auto
  int refine_iters = 200;
  double delta = 1e-9;
};

struct TheoremReport {
  int n = 0;
  double p = 1.0;
  bool heuristic = false;

  Transcript transcript;
  SeparatedFamily family;
  SeparationReport separation;

  double membership_violation = 0.0;  // worst over family and step pairs
  double membership_tol = 0.0;
  bool membership_ok = false;

  DiameterResult info_diameter;  // g0_n and the optimal design
  double sampling = 0.0;         // g_n = info_diameter.value / 2
  CertifiedInterval eps;

  double upper_rhs = 0.0;  // (n+1)^(1/p) * eps.hi
  bool upper_ok = false;   // sampling <= upper_rhs + 1e-6
  double lower_required = 0.0;  // (g0 - delta) / (2 (n+1)^(1/p))
  bool lower_ok = false;        // eps.lo >= lower_required - 1e-8
  bool pass = false;
};

/// End-to-end check of the sampling-versus-entropy inequality: computes g_n
/// by design search, encloses eps_n with the family points offered to the
/// packing, and asserts both directions the construction promises. A
/// heuristic pass is still sound: the greedy value dominates the true
/// sampling number and the greedy design diameter is at most the transcript
/// diameter.
TheoremReport verify_main_inequality(const FunctionClass& F, int n,
                                     const VerifyOptions& opts = {});

}  // namespace widthslab

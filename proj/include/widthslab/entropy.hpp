#pragma once

#include <cstdint>
#include <vector>

#include "widthslab/geometry.hpp"
#include "widthslab/results.hpp"

// Packing and covering machinery for entropy numbers under the sup norm.
// eps_n asks for 2^n balls covering the class; phi_n for 2^n + 1 class
// members pairwise separated. A packing certifies a lower bound
// (eps_n >= phi_n >= separation/2), a covering an upper bound.

namespace widthslab {

/// A finite family of class members with a certified minimum pairwise sup
/// distance. membership_tol records the slack candidates were admitted at.
struct SeparatedFamily {
  std::vector<Vec> points;
  double separation = 0.0;
  double membership_tol = 0.0;
};

/// Farthest point packing of `count` members, refined by single point
/// exchanges. The candidate pool mixes the class extreme points, the
/// caller's extra candidates (dropped unless they pass the membership check
/// at tolerance 1e-6 * max(1, radius)), and seeded interior draws. Ties in
/// the greedy pick go to the lowest pool index, so a fixed seed fixes the
/// family. count < 2 throws ParameterError, count > 65536 BudgetError.
SeparatedFamily greedy_packing(const FunctionClass& F, std::size_t count,
                               std::uint64_t seed, int refine_iters = 200,
                               const std::vector<Vec>& extra_candidates = {});

/// A covering of the whole class by `centers`, valid with the stated
/// radius: every class member lies within `radius` of some center in sup
/// norm. net_mesh is the realized l1 resolution of the vertex weight grid,
/// net_size the number of grid hull points the k-center stage ran on.
struct CoveringCertificate {
  std::vector<Vec> centers;
  double radius = 0.0;
  double net_mesh = 0.0;
  std::size_t net_size = 0;
};

/// Upper bound for eps_n on vertex described classes: lays an l1 grid of
/// resolution <= mesh over the vertex weights (every class member is within
/// delta = net_mesh * max_i |v_i|_oo of the net), then places 2^n centers by
/// farthest point seeding plus alternating reassignment, keeping the best
/// placement seen. Certified radius = k-center radius over the net + delta.
/// When 2^n reaches the net size the net itself is the center set and the
/// radius is delta alone. mesh <= 0 picks the finest grid within budget,
/// aiming for delta <= 5% of the class radius. Grids beyond 10^7 points
/// throw BudgetError; classes without a vertex description
/// UnsupportedClassError; m > 16 ParameterError.
CoveringCertificate net_cover_upper(const FunctionClass& F, int n,
                                    double mesh = 0.0);

struct EntropyOptions {
  std::uint64_t seed = 1;
  int refine_iters = 200;
  double mesh = 0.0;  // forwarded to net_cover_upper; <= 0 = auto
  std::vector<Vec> extra_candidates;
};

/// Certified enclosure of eps_n: lo = packing separation / 2 with 2^n + 1
/// points, hi = net covering radius where a vertex description exists and
/// otherwise the bounding box half width (one center works for every n).
CertifiedInterval entropy_interval(const FunctionClass& F, int n,
                                   const EntropyOptions& opts = {});

/// Exhaustive min-max covering radius over all 2^n-subsets of
/// candidate_grid, measured against the weight-grid net and certified by
/// adding the net slack. Trivial when 2^n already reaches the net size
/// (returns the slack alone). Requires |grid| <= 20 and 2^n <= 8.
double exact_small_entropy(const FunctionClass& F, int n,
                           const std::vector<Vec>& candidate_grid,
                           double mesh = 0.0);

}  // namespace widthslab

#pragma once

#include <cstdint>
#include <string>

#include "widthslab/entropy.hpp"
#include "widthslab/geometry.hpp"
#include "widthslab/recovery.hpp"

// Upper bounds on Kolmogorov widths: the distance of a class to its best
// n-dimensional linear subspace. Any concrete subspace certifies an upper
// bound; the distance of a hull to a subspace peaks at a vertex, so a vertex
// sweep evaluates a candidate exactly.

namespace widthslab {

struct SubspaceCandidate {
  Matrix basis;              // rows span the subspace, possibly fewer than n
  double worst_error = 0.0;  // max over vertices of sup-norm distance
  std::string origin;        // vertex-span | principal-components | refined
};

/// Best subspace found among principal components of the vertices, greedy
/// vertex spans, and seeded random vertex subsets, then improved by
/// alternating refits against the worst vertices. The reported worst_error
/// never increases during refinement. Vertex-described classes only.
SubspaceCandidate kolmogorov_upper(const FunctionClass& F, int n, int iters,
                                   std::uint64_t seed);

/// Exact euclidean-ball width of a centered ellipsoid: the (n+1)-st largest
/// singular value of its map. A shifted center throws UnsupportedClassError.
double ellipsoid_width_euclidean(const Ellipsoid& E, int n);

struct WidthOptions {
  std::uint64_t budget = 100000;
  bool heuristic = false;
  int iters = 64;
  std::uint64_t seed = 1;
};

struct WidthReport {
  int n = 0;
  SubspaceCandidate width;
  double sampling = 0.0;  // g_n (greedy value when heuristic)
  double bound = 0.0;     // (n+1) * worst_error
  bool upper_ok = false;  // sampling <= bound + 1e-6
  double ratio_g_width = 0.0;    // sampling / worst_error, reported as is
  double ratio_width_neps = 0.0;  // worst_error / (n * eps_hi), reported as is
  bool pass = false;
};

/// Asserts the sampling-versus-width inequality g_n <= (n+1) d_n through the
/// certified upper bound, and reports the tightness ratios without asserting
/// them.
WidthReport verify_width_inequalities(const FunctionClass& F, int n,
                                      const WidthOptions& opts = {});

}  // namespace widthslab

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "widthslab/geometry.hpp"

// Builders for the stock classes the lab runs on: smoothness balls over the
// uniform grid, lp balls, and seeded random vertex hulls.

namespace widthslab {

/// s-th order forward difference matrix, (m-s) x m, rows
/// (D f)_j = sum_k (-1)^(s-k) C(s,k) f_(j+k).
Matrix forward_difference(std::size_t m, int s);

/// Parameters of a discretized smoothness ball: m grid points on the unit
/// interval, derivative order s (1 <= s < m), norm exponent p. Supported p:
/// 1, 2, and infinity.
struct SobolevSpec {
  std::size_t m = 0;
  int s = 1;
  double p = 2.0;
};

/// The norm the ball of sobolev_ball() is unit for, evaluated directly:
///   p = inf : max(i) |f_i|  +  max(j) |(h^(-s) D f)_j|
///   p = 1   : h sum |f_i|   +  h sum |(h^(-s) D f)_j|
///   p = 2   : sqrt(h |f|_2^2 + h |h^(-s) D f|_2^2)
/// with h the grid spacing and D the s-th forward difference.
double sobolev_norm(const SobolevSpec& spec, const Vec& f);

/// Grid functions with sobolev_norm(spec, f) <= 1. p = 1 and p = inf produce
/// halfspace bodies with auxiliary bound variables, p = 2 an ellipsoid whose
/// map is the inverse square root of the quadratic form.
FunctionClass sobolev_ball(const SobolevSpec& spec, std::string id = "");
FunctionClass sobolev_ball(std::size_t m, int s, double p,
                           std::string id = "");

/// Unit lp ball around 0. p = 1 gives the cross polytope as 2m signed unit
/// vectors, p = inf the cube as its 2^m sign vertices (m <= 12), p in (0,1)
/// the quasinorm ball body with the identity map. Other exponents throw.
FunctionClass lp_ball(std::size_t m, double p, std::string id = "");

/// Hull of k points drawn uniformly from [-radius, radius]^m. With
/// symmetrize the negated points are appended and the class is marked
/// symmetric.
FunctionClass random_vpolytope(std::size_t m, std::size_t k, double radius,
                               std::uint64_t seed, bool symmetrize = false,
                               std::string id = "");

struct RateFit {
  double exponent = 0.0;   // slope of log(value) against log(n)
  double intercept = 0.0;  // fitted value at n = 1
  double residual = 0.0;   // rms of log residuals
  int points = 0;
};

/// Least squares in log-log over the paired series, skipping entries with
/// n < 1. Nonpositive values and fewer than 3 usable points throw.
RateFit fit_rate(const std::vector<int>& ns, const std::vector<double>& values);

}  // namespace widthslab

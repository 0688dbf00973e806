#include "widthslab/classes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace widthslab {

Matrix forward_difference(std::size_t m, int s) {
  if (s < 1 || static_cast<std::size_t>(s) >= m)
    throw ParameterError("difference order must satisfy 1 <= s < m");
  // (shift - 1)^s: coefficient C(s,k) * (-1)^(s-k) on f_(j+k)
  std::vector<double> coef(s + 1, 0.0);
  double binom = 1.0;
  for (int k = 0; k <= s; ++k) {
    coef[k] = ((s - k) % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (s - k) / (k + 1);
  }
  const std::size_t rows = m - s;
  Matrix D(rows, m);
  for (std::size_t j = 0; j < rows; ++j)
    for (int k = 0; k <= s; ++k) D(j, j + k) = coef[k];
  return D;
}

namespace {

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

void check_sobolev(const SobolevSpec& spec) {
  if (spec.m < 2) throw ParameterError("smoothness ball needs m >= 2");
  if (spec.s < 1 || static_cast<std::size_t>(spec.s) >= spec.m)
    throw ParameterError("difference order must satisfy 1 <= s < m");
  if (!(spec.p == 1.0 || spec.p == 2.0 || std::isinf(spec.p)))
    throw ParameterError("smoothness ball exponent must be 1, 2 or inf");
}

}  // namespace

double sobolev_norm(const SobolevSpec& spec, const Vec& f) {
  check_sobolev(spec);
  if (f.size() != spec.m)
    throw DimensionError("function length does not match the grid");
  Matrix D = forward_difference(spec.m, spec.s);
  const double h = Domain::unit_interval(spec.m).spacing();
  const double hs = std::pow(h, -static_cast<double>(spec.s));
  const std::size_t r = D.rows();
  Vec d(r, 0.0);
  for (std::size_t j = 0; j < r; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.m; ++k) acc += D(j, k) * f[k];
    d[j] = hs * acc;
  }
  if (std::isinf(spec.p)) {
    double a = 0.0, b = 0.0;
    for (double v : f) a = std::max(a, std::fabs(v));
    for (double v : d) b = std::max(b, std::fabs(v));
    return a + b;
  }
  if (spec.p == 1.0) {
    double acc = 0.0;
    for (double v : f) acc += std::fabs(v);
    for (double v : d) acc += std::fabs(v);
    return h * acc;
  }
  double acc = 0.0;
  for (double v : f) acc += v * v;
  for (double v : d) acc += v * v;
  return std::sqrt(h * acc);
}

FunctionClass sobolev_ball(const SobolevSpec& spec, std::string id) {
  check_sobolev(spec);
  const std::size_t m = spec.m;
  Matrix D = forward_difference(m, spec.s);
  const double h = Domain::unit_interval(m).spacing();
  const double hs = std::pow(h, -static_cast<double>(spec.s));
  const std::size_t r = D.rows();

  if (id.empty()) {
    std::ostringstream os;
    os << "sobolev-m" << m << "-s" << spec.s << "-p" << fmt_p(spec.p);
    id = os.str();
  }

  if (std::isinf(spec.p)) {
    // vars (f, t, u): t dominates every |f_i|, u every scaled difference,
    // t + u <= 1. Projecting out (t, u) leaves exactly
    // max|f| + max|h^(-s) D f| <= 1 but with 2m + 2(m-s) + 1 rows instead of
    // the 4m(m-s) pairwise products, which keeps the section solves on big
    // grids affordable.
    const std::size_t width = m + 2;
    Matrix rows(2 * m + 2 * r + 1, width);
    Vec bounds(2 * m + 2 * r + 1, 0.0);
    std::size_t at = 0;
    for (std::size_t i = 0; i < m; ++i) {
      rows(at, i) = 1.0;
      rows(at, m) = -1.0;
      ++at;
      rows(at, i) = -1.0;
      rows(at, m) = -1.0;
      ++at;
    }
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        rows(at, k) = hs * D(j, k);
        rows(at + 1, k) = -hs * D(j, k);
      }
      rows(at, m + 1) = -1.0;
      rows(at + 1, m + 1) = -1.0;
      at += 2;
    }
    rows(at, m) = 1.0;
    rows(at, m + 1) = 1.0;
    bounds[at] = 1.0;
    return FunctionClass(std::move(id),
                         HPolytope{std::move(rows), std::move(bounds), 2},
                         true);
  }

  if (spec.p == 1.0) {
    // vars (f, a, d): a_i >= |f_i|, d_j >= |scaled difference_j|,
    // h*(sum a + sum d) <= 1.
    const std::size_t width = m + m + r;
    Matrix rows(2 * m + 2 * r + 1, width);
    Vec bounds(2 * m + 2 * r + 1, 0.0);
    std::size_t at = 0;
    for (std::size_t i = 0; i < m; ++i) {
      rows(at, i) = 1.0;
      rows(at, m + i) = -1.0;
      ++at;
      rows(at, i) = -1.0;
      rows(at, m + i) = -1.0;
      ++at;
    }
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        rows(at, k) = hs * D(j, k);
        rows(at + 1, k) = -hs * D(j, k);
      }
      rows(at, 2 * m + j) = -1.0;
      rows(at + 1, 2 * m + j) = -1.0;
      at += 2;
    }
    for (std::size_t i = 0; i < m; ++i) rows(at, m + i) = h;
    for (std::size_t j = 0; j < r; ++j) rows(at, 2 * m + j) = h;
    bounds[at] = 1.0;
    return FunctionClass(
        std::move(id),
        HPolytope{std::move(rows), std::move(bounds), static_cast<int>(m + r)},
        true);
  }

  // p = 2: unit ball of f^T Q f with Q = h I + h B^T B, realized as the
  // image of the euclidean ball under Q^(-1/2).
  using EMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  EMat B(r, m);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < m; ++k) B(j, k) = hs * D(j, k);
  EMat Q = h * EMat::Identity(m, m) + h * (B.transpose() * B);
  Eigen::SelfAdjointEigenSolver<EMat> es(Q);
  if (es.info() != Eigen::Success)
    throw ConditioningError("quadratic form decomposition failed");
  EMat map = es.eigenvectors() *
             es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse()
                 .asDiagonal() *
             es.eigenvectors().transpose();
  Matrix M(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) M(i, j) = map(i, j);
  return FunctionClass(std::move(id), Ellipsoid{Vec(m, 0.0), std::move(M)},
                       true);
}

FunctionClass sobolev_ball(std::size_t m, int s, double p, std::string id) {
  return sobolev_ball(SobolevSpec{m, s, p}, std::move(id));
}

FunctionClass lp_ball(std::size_t m, double p, std::string id) {
  if (m == 0) throw ParameterError("ball needs m >= 1");
  if (id.empty()) {
    std::ostringstream os;
    os << "lpball-m" << m << "-p" << fmt_p(p);
    id = os.str();
  }

  if (p == 1.0) {
    Matrix V(2 * m, m);
    for (std::size_t i = 0; i < m; ++i) {
      V(2 * i, i) = 1.0;
      V(2 * i + 1, i) = -1.0;
    }
    return FunctionClass(std::move(id), VPolytope{std::move(V)}, true);
  }
  if (p > 0.0 && p < 1.0) {
    Matrix M = Matrix::identity(m);
    return FunctionClass(std::move(id), PBall{std::move(M), p}, true);
  }
  if (std::isinf(p)) {
    if (m > 12)
      throw ParameterError("cube vertex lists stop at m = 12; use an "
                           "hpolytope description for larger cubes");
    const std::size_t k = std::size_t{1} << m;
    Matrix V(k, m);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < m; ++j)
        V(i, j) = ((i >> j) & 1u) ? 1.0 : -1.0;
    return FunctionClass(std::move(id), VPolytope{std::move(V)}, true);
  }
  throw ParameterError("ball exponent must lie in (0,1] or be inf");
}

FunctionClass random_vpolytope(std::size_t m, std::size_t k, double radius,
                               std::uint64_t seed, bool symmetrize,
                               std::string id) {
  if (m == 0 || k == 0) throw ParameterError("need m >= 1 and k >= 1");
  if (!(radius > 0.0)) throw ParameterError("radius must be positive");
  if (id.empty()) {
    std::ostringstream os;
    os << "randvpoly-m" << m << "-k" << k << "-seed" << seed;
    if (symmetrize) os << "-sym";
    id = os.str();
  }
  Rng rng(seed);
  const std::size_t rows = symmetrize ? 2 * k : k;
  Matrix V(rows, m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j)
      V(i, j) = rng.uniform(-radius, radius);
  if (symmetrize)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < m; ++j) V(k + i, j) = -V(i, j);
  return FunctionClass(std::move(id), VPolytope{std::move(V)}, symmetrize);
}

RateFit fit_rate(const std::vector<int>& ns,
                 const std::vector<double>& values) {
  if (ns.size() != values.size())
    throw DimensionError("rate fit needs matching n and value lists");
  RateFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> used;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) continue;
    if (!(values[i] > 0.0))
      throw ParameterError("rate fit needs positive values");
    double x = std::log(static_cast<double>(ns[i]));
    double y = std::log(values[i]);
    used.emplace_back(x, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.points = static_cast<int>(used.size());
  if (fit.points < 3) throw ParameterError("rate fit needs at least 3 points");
  double denom = fit.points * sxx - sx * sx;
  if (std::fabs(denom) < 1e-12)
    throw ParameterError("rate fit needs distinct n values");
  fit.exponent = (fit.points * sxy - sx * sy) / denom;
  double logc = (sy - fit.exponent * sx) / fit.points;
  fit.intercept = std::exp(logc);
  double rss = 0.0;
  for (const auto& [x, y] : used) {
    double e = y - (logc + fit.exponent * x);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / fit.points);
  return fit;
}

}  // namespace widthslab

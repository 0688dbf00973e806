#include "widthslab/widths.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "widthslab/kernels.hpp"
#include "widthslab/lp.hpp"

namespace widthslab {
namespace {

using EMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Exact sup-norm distance of one point to the row span of `basis`.
double point_to_span(const Vec& v, const Matrix& basis) {
  const std::size_t m = v.size();
  const std::size_t r = basis.rows();
  if (r == 0) return kernels::max_abs(v.data(), m);
  lp::Problem prob(0);
  for (std::size_t j = 0; j < r; ++j) prob.add_var(true);
  const int t = prob.add_var(true);
  for (std::size_t i = 0; i < m; ++i) {
    Vec row_pos(r + 1, 0.0), row_neg(r + 1, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
      row_pos[j] = basis(j, i);
      row_neg[j] = -basis(j, i);
    }
    row_pos[t] = -1.0;
    row_neg[t] = -1.0;
    prob.add_row(lp::Sense::le, std::move(row_pos), v[i]);
    prob.add_row(lp::Sense::le, std::move(row_neg), -v[i]);
  }
  lp::SimplexD spx(prob);
  Vec obj(r + 1, 0.0);
  obj[t] = -1.0;
  auto res = spx.maximize(obj);
  if (res.status != lp::Status::optimal)
    throw SolverError("projection program did not solve");
  return -res.value;
}

double eval_candidate(const Matrix& verts, const Matrix& basis) {
  double worst = 0.0;
  for (std::size_t i = 0; i < verts.rows(); ++i)
    worst = std::max(worst, point_to_span(verts.row_vec(i), basis));
  return worst;
}

Matrix orthonormal_rows(const EMat& span, int n) {
  Eigen::JacobiSVD<EMat> svd(span, Eigen::ComputeThinV);
  const double tol =
      1e-12 * std::max(1.0, svd.singularValues().size()
                                ? svd.singularValues()(0)
                                : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  rank = std::min(rank, n);
  Matrix out(rank, span.cols());
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < span.cols(); ++j) out(i, j) = svd.matrixV()(j, i);
  return out;
}

}  // namespace

SubspaceCandidate kolmogorov_upper(const FunctionClass& F, int n, int iters,
                                   std::uint64_t seed) {
  if (n < 0) throw ParameterError("subspace dimension must be nonnegative");
  const VPolytope* vv = F.vertex_view();
  if (!vv)
    throw UnsupportedClassError(
        "width upper bounds need a vertex description of the class");
  const Matrix& verts = vv->vertices;
  const std::size_t m = F.dim();
  const std::size_t k = verts.rows();

  SubspaceCandidate best;
  if (static_cast<std::size_t>(n) >= m) {
    best.basis = Matrix::identity(m);
    best.worst_error = 0.0;
    best.origin = "vertex-span";
    return best;
  }
  if (n == 0) {
    best.basis = Matrix(0, m);
    best.worst_error = F.radius();
    best.origin = "vertex-span";
    return best;
  }

  EMat V(k, m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) V(i, j) = verts(i, j);

  auto consider = [&](Matrix basis, const char* origin) {
    double err = eval_candidate(verts, basis);
    if (best.origin.empty() || err < best.worst_error) {
      best.basis = std::move(basis);
      best.worst_error = err;
      best.origin = origin;
    }
  };

  consider(orthonormal_rows(V, n), "principal-components");

  // Greedy vertex span: grow by the vertex farthest (euclidean residual)
  // from the current span; cheap to select, evaluated exactly afterwards.
  {
    EMat span(n, m);
    std::vector<bool> used(k, false);
    Eigen::VectorXd norms = V.rowwise().norm();
    int first = 0;
    norms.maxCoeff(&first);
    span.row(0) = V.row(first);
    used[first] = true;
    for (int step = 1; step < n; ++step) {
      EMat part = span.topRows(step);
      Eigen::JacobiSVD<EMat> svd(part, Eigen::ComputeThinV);
      int pick = -1;
      double far = -1.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (used[i]) continue;
        Eigen::VectorXd v = V.row(i).transpose();
        Eigen::VectorXd coeff = svd.matrixV().transpose() * v;
        double resid = (v - svd.matrixV() * coeff).norm();
        if (resid > far) {
          far = resid;
          pick = static_cast<int>(i);
        }
      }
      if (pick < 0) break;
      span.row(step) = V.row(pick);
      used[pick] = true;
    }
    consider(orthonormal_rows(span, n), "vertex-span");
  }

  // Random vertex subsets.
  Rng rng(seed);
  const int tries = std::max(0, iters);
  for (int it = 0; it < tries; ++it) {
    EMat span(n, m);
    std::vector<std::size_t> picked;
    while (picked.size() < static_cast<std::size_t>(n)) {
      std::size_t idx = rng.index(k);
      bool dup = false;
      for (std::size_t q : picked) dup = dup || q == idx;
      if (!dup) {
        span.row(picked.size()) = V.row(idx);
        picked.push_back(idx);
      }
    }
    consider(orthonormal_rows(span, n), "vertex-span");
  }

  // Alternating refinement: refit against the hardest vertices, keep only
  // strict improvements so the reported error never increases.
  for (int round = 0; round < std::max(1, iters / 4); ++round) {
    std::vector<std::pair<double, std::size_t>> errs(k);
    for (std::size_t i = 0; i < k; ++i)
      errs[i] = {point_to_span(verts.row_vec(i), best.basis), i};
    std::stable_sort(errs.begin(), errs.end(), [](const auto& a,
                                                  const auto& b) {
      return a.first > b.first;
    });
    const std::size_t take = std::min(k, static_cast<std::size_t>(n) + 2);
    EMat hard(take, m);
    for (std::size_t i = 0; i < take; ++i)
      hard.row(i) = V.row(errs[i].second);
    Matrix candidate = orthonormal_rows(hard, n);
    double err = eval_candidate(verts, candidate);
    if (err < best.worst_error - 1e-15) {
      best.basis = std::move(candidate);
      best.worst_error = err;
      best.origin = "refined";
    } else {
      break;
    }
  }
  return best;
}

double ellipsoid_width_euclidean(const Ellipsoid& E, int n) {
  if (n < 0) throw ParameterError("subspace dimension must be nonnegative");
  for (double c : E.center)
    if (c != 0.0)
      throw UnsupportedClassError(
          "euclidean widths are exact only for centered ellipsoids");
  const std::size_t m = E.center.size();
  if (static_cast<std::size_t>(n) >= m) return 0.0;
  EMat M(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) M(i, j) = E.map(i, j);
  Eigen::JacobiSVD<EMat> svd(M);
  return svd.singularValues()(n);
}

WidthReport verify_width_inequalities(const FunctionClass& F, int n,
                                      const WidthOptions& opts) {
  WidthReport rep;
  rep.n = n;
  rep.width = kolmogorov_upper(F, n, opts.iters, opts.seed);
  rep.sampling =
      sampling_number(F, n, opts.budget, opts.heuristic).value;
  rep.bound = (n + 1.0) * rep.width.worst_error;
  rep.upper_ok = rep.sampling <= rep.bound + 1e-6;
  rep.ratio_g_width = rep.sampling / rep.width.worst_error;
  double eps_hi = std::numeric_limits<double>::quiet_NaN();
  if (F.vertex_view() && F.dim() <= 16) {
    EntropyOptions eo;
    eo.seed = opts.seed;
    eps_hi = entropy_interval(F, n, eo).hi;
  }
  rep.ratio_width_neps = rep.width.worst_error / (n * eps_hi);
  rep.pass = rep.upper_ok;
  return rep;
}

}  // namespace widthslab

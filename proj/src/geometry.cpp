#include "widthslab/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "widthslab/kernels.hpp"

namespace widthslab {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>;
using EVec = Eigen::VectorXd;

EMat to_eigen(const Matrix& m) {
  return Eigen::Map<const EMat>(m.data().data(), m.rows(), m.cols());
}

Matrix from_eigen(const EMat& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

double pnorm(const Vec& u, double p) {
  double s = 0.0;
  for (double x : u) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

Vec matvec(const Matrix& m, const Vec& x) {
  Vec out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    out[i] = kernels::dot(m.row(i), x.data(), m.cols());
  return out;
}

Vec apply_transposed(const Matrix& m, const Vec& x) {
  Vec out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    kernels::axpy(x[i], m.row(i), out.data(), m.cols());
  return out;
}

double euclid(const Vec& v) {
  return std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain / SampleDesign

Domain Domain::unit_interval(std::size_t m) {
  if (m == 0) throw ParameterError("domain needs at least one point");
  Domain d;
  d.points.resize(m);
  if (m == 1) {
    d.points[0] = 0.0;
  } else {
    for (std::size_t i = 0; i < m; ++i)
      d.points[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  }
  return d;
}

double Domain::spacing() const {
  if (points.size() < 2) return 1.0;
  return points[1] - points[0];
}

SampleDesign::SampleDesign(std::vector<int> idx) : indices(std::move(idx)) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 1; i < indices.size(); ++i)
    if (indices[i] == indices[i - 1])
      throw ParameterError("design indices must be distinct");
}

bool SampleDesign::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

SampleDesign SampleDesign::with(int i) const {
  std::vector<int> idx = indices;
  idx.push_back(i);
  return SampleDesign(std::move(idx));
}

void SampleDesign::validate(std::size_t m) const {
  for (int i : indices)
    if (i < 0 || static_cast<std::size_t>(i) >= m)
      throw ParameterError("design index out of range");
}

std::string SampleDesign::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) os << ';';
    os << indices[i];
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// FunctionClass

namespace {

struct SupportImpl {
  double value;
  Vec maximizer;
};

// Shared building block: support over an H-polytope via one simplex that can
// be re-used for several directions.
class HPolySupporter {
 public:
  HPolySupporter(const HPolytope& h, std::size_t dim, double feas_tol)
      : h_(h), dim_(dim) {
    lp::Problem prob(0);
    const std::size_t width = h.rows.cols();
    for (std::size_t v = 0; v < width; ++v) prob.add_var(true);
    for (std::size_t r = 0; r < h.rows.rows(); ++r)
      prob.add_row(lp::Sense::le, h.rows.row_vec(r), h.bounds[r]);
    lp::Options opt;
    opt.feas_tol = feas_tol;
    spx_ = std::make_unique<lp::Simplex<double>>(prob, opt);
    width_ = width;
  }

  SupportImpl maximize(const Vec& w) {
    Vec c(width_, 0.0);
    std::copy(w.begin(), w.end(), c.begin());
    auto res = spx_->maximize(c);
    if (res.status == lp::Status::unbounded)
      throw SolverError("class is unbounded: support direction escapes");
    if (res.status != lp::Status::optimal)
      throw SolverError("support LP failed");
    Vec f(res.x.begin(), res.x.begin() + dim_);
    return {res.value, std::move(f)};
  }

 private:
  const HPolytope& h_;
  std::size_t dim_, width_ = 0;
  std::unique_ptr<lp::Simplex<double>> spx_;
};

SupportImpl support_body(const FunctionClass::Body& body, std::size_t dim,
                         const Vec& w, double feas_tol) {
  if (const auto* vp = std::get_if<VPolytope>(&body)) {
    const Matrix& V = vp->vertices;
    std::size_t best = 0;
    double bestval = kernels::dot(V.row(0), w.data(), dim);
    for (std::size_t i = 1; i < V.rows(); ++i) {
      double val = kernels::dot(V.row(i), w.data(), dim);
      if (val > bestval) {
        bestval = val;
        best = i;
      }
    }
    return {bestval, V.row_vec(best)};
  }
  if (const auto* hp = std::get_if<HPolytope>(&body)) {
    HPolySupporter s(*hp, dim, feas_tol);
    return s.maximize(w);
  }
  if (const auto* el = std::get_if<Ellipsoid>(&body)) {
    Vec mtw = apply_transposed(el->map, w);
    double nrm = euclid(mtw);
    Vec f = el->center;
    if (nrm > 0) {
      Vec u(mtw);
      for (double& x : u) x /= nrm;
      Vec mu = matvec(el->map, u);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += mu[i];
    }
    return {kernels::dot(w.data(), el->center.data(), dim) + nrm, std::move(f)};
  }
  const auto& pb = std::get<PBall>(body);
  // sup over the p-ball image equals sup over its convex hull, the
  // cross-polytope image: attained at a signed map column.
  Vec mtw = apply_transposed(pb.map, w);
  std::size_t best = 0;
  double bestval = std::fabs(mtw[0]);
  for (std::size_t i = 1; i < mtw.size(); ++i)
    if (std::fabs(mtw[i]) > bestval) {
      bestval = std::fabs(mtw[i]);
      best = i;
    }
  double sgn = mtw[best] >= 0 ? 1.0 : -1.0;
  Vec f(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) f[i] = sgn * pb.map(i, best);
  return {bestval, std::move(f)};
}

}  // namespace

FunctionClass::FunctionClass(std::string id, Body body, bool symmetric)
    : id_(std::move(id)), symmetric_(symmetric) {
  if (const auto* vp = std::get_if<VPolytope>(&body)) {
    if (vp->vertices.empty()) throw DimensionError("vertex list empty");
    dim_ = vp->vertices.cols();
  } else if (const auto* hp = std::get_if<HPolytope>(&body)) {
    if (hp->rows.empty()) throw DimensionError("halfspace list empty");
    if (hp->rows.rows() != hp->bounds.size())
      throw DimensionError("bounds length mismatch");
    if (hp->aux < 0 || static_cast<std::size_t>(hp->aux) >= hp->rows.cols())
      throw DimensionError("bad auxiliary count");
    dim_ = hp->rows.cols() - hp->aux;
  } else if (const auto* el = std::get_if<Ellipsoid>(&body)) {
    if (el->map.rows() != el->map.cols() ||
        el->map.rows() != el->center.size())
      throw DimensionError("ellipsoid map must be square");
    dim_ = el->center.size();
  } else {
    const auto& pb = std::get<PBall>(body);
    if (pb.map.rows() != pb.map.cols()) throw DimensionError("map not square");
    if (!(pb.p > 0.0 && pb.p <= 1.0))
      throw ParameterError("ball exponent must lie in (0, 1]");
    dim_ = pb.map.rows();
    pball_p_ = pb.p;
  }

  body_ = std::make_shared<const Body>(std::move(body));

  // Invertibility and condition for map-based bodies.
  const Matrix* map = nullptr;
  if (const auto* el = std::get_if<Ellipsoid>(body_.get())) map = &el->map;
  if (const auto* pb = std::get_if<PBall>(body_.get())) map = &pb->map;
  if (map) {
    EMat M = to_eigen(*map);
    Eigen::JacobiSVD<EMat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(dim_ - 1);
    if (!(smin > 1e-12 * std::max(1.0, smax)))
      throw ConditioningError("map is singular or too ill-conditioned");
    inverse_ = std::make_shared<const Matrix>(from_eigen(M.inverse()));
  }

  if (const auto* pb = std::get_if<PBall>(body_.get()); pb && pb->p == 1.0) {
    Matrix verts(2 * dim_, dim_);
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t i = 0; i < dim_; ++i) {
        verts(2 * j, i) = pb->map(i, j);
        verts(2 * j + 1, i) = -pb->map(i, j);
      }
    vertex_cache_ = std::make_shared<const VPolytope>(VPolytope{verts});
  }

  // Sup-norm radius; doubles as the boundedness check for halfspace bodies.
  if (const auto* vp = std::get_if<VPolytope>(body_.get())) {
    radius_ = kernels::max_abs(vp->vertices.data().data(),
                               vp->vertices.data().size());
  } else if (const auto* hp = std::get_if<HPolytope>(body_.get())) {
    HPolySupporter s(*hp, dim_, 1e-9);
    double r = 0.0;
    Vec w(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      w[i] = 1.0;
      r = std::max(r, s.maximize(w).value);
      w[i] = -1.0;
      r = std::max(r, s.maximize(w).value);
      w[i] = 0.0;
    }
    radius_ = r;
  } else if (const auto* el = std::get_if<Ellipsoid>(body_.get())) {
    double r = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double rn = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) rn += el->map(i, j) * el->map(i, j);
      r = std::max(r, std::fabs(el->center[i]) + std::sqrt(rn));
    }
    radius_ = r;
  } else {
    const auto& pb = std::get<PBall>(*body_);
    radius_ = kernels::max_abs(pb.map.data().data(), pb.map.data().size());
  }
}

bool FunctionClass::convex() const {
  if (convex_override_) return *convex_override_;
  if (const auto* pb = std::get_if<PBall>(body_.get()))
    return pb->p == 1.0;
  return true;
}

double FunctionClass::feas_tol() const {
  return 1e-9 * std::max(1.0, radius_);
}

const VPolytope* FunctionClass::vertex_view() const {
  if (const auto* vp = std::get_if<VPolytope>(body_.get())) return vp;
  if (vertex_cache_) return vertex_cache_.get();
  return nullptr;
}

const Matrix* FunctionClass::inverse_map() const { return inverse_.get(); }

// ---------------------------------------------------------------------------
// Pointwise operations

double sup_norm(const Vec& v) { return kernels::max_abs(v.data(), v.size()); }

bool effectively_diagonal(const Matrix& M) {
  if (M.rows() != M.cols()) return false;
  const double scale =
      kernels::max_abs(M.data().data(), M.data().size());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (i != j && std::fabs(M(i, j)) > 1e-14 * std::max(1.0, scale))
        return false;
  return true;
}

SupportResult support(const FunctionClass& F, const Vec& w) {
  if (w.size() != F.dim()) throw DimensionError("direction width mismatch");
  auto r = support_body(F.body(), F.dim(), w, F.feas_tol());
  return {r.value, std::move(r.maximizer)};
}

double member_violation(const FunctionClass& F, const Vec& v) {
  if (v.size() != F.dim()) throw DimensionError("point width mismatch");
  const auto& body = F.body();
  const std::size_t m = F.dim();

  if (const auto* vp = std::get_if<VPolytope>(&body)) {
    const Matrix& V = vp->vertices;
    const std::size_t k = V.rows(), m = F.dim();
    lp::Problem prob(0);
    for (std::size_t i = 0; i < k; ++i) prob.add_var(false);
    int s = prob.add_var(false);
    for (std::size_t j = 0; j < m; ++j) {
      Vec lo(prob.nvars, 0.0), hi(prob.nvars, 0.0);
      for (std::size_t i = 0; i < k; ++i) {
        hi[i] = V(i, j);
        lo[i] = -V(i, j);
      }
      hi[s] = -1.0;
      lo[s] = -1.0;
      prob.add_row(lp::Sense::le, std::move(hi), v[j]);
      prob.add_row(lp::Sense::le, std::move(lo), -v[j]);
    }
    Vec ones(prob.nvars, 0.0);
    for (std::size_t i = 0; i < k; ++i) ones[i] = 1.0;
    prob.add_row(lp::Sense::eq, std::move(ones), 1.0);

    lp::Options opt;
    opt.feas_tol = F.feas_tol();
    lp::Simplex<double> spx(prob, opt);
    Vec c(prob.nvars, 0.0);
    c[s] = -1.0;
    auto res = spx.maximize(c);
    if (res.status != lp::Status::optimal)
      throw SolverError("membership LP failed");
    return -res.value;
  }

  if (const auto* hp = std::get_if<HPolytope>(&body)) {
    if (hp->aux == 0) {
      double worst = -1e300;
      for (std::size_t r = 0; r < hp->rows.rows(); ++r) {
        double lhs = kernels::dot(hp->rows.row(r), v.data(), m);
        worst = std::max(worst, lhs - hp->bounds[r]);
      }
      return worst;
    }
    // Violation minimized over the lifted variables.
    lp::Problem prob(0);
    for (int a = 0; a < hp->aux; ++a) prob.add_var(true);
    int s = prob.add_var(false);
    for (std::size_t r = 0; r < hp->rows.rows(); ++r) {
      Vec c(prob.nvars, 0.0);
      for (int a = 0; a < hp->aux; ++a) c[a] = hp->rows(r, m + a);
      c[s] = -1.0;
      double lhs = kernels::dot(hp->rows.row(r), v.data(), m);
      prob.add_row(lp::Sense::le, std::move(c), hp->bounds[r] - lhs);
    }
    lp::Options opt;
    opt.feas_tol = F.feas_tol();
    lp::Simplex<double> spx(prob, opt);
    Vec c(prob.nvars, 0.0);
    c[s] = -1.0;
    auto res = spx.maximize(c);
    if (res.status != lp::Status::optimal)
      throw SolverError("membership LP failed");
    return -res.value;
  }

  if (const auto* el = std::get_if<Ellipsoid>(&body)) {
    Vec d(v);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= el->center[i];
    Vec u = matvec(*F.inverse_map(), d);
    return euclid(u) - 1.0;
  }

  const auto& pb = std::get<PBall>(body);
  Vec u = matvec(*F.inverse_map(), v);
  return pnorm(u, pb.p) - 1.0;
}

bool member(const FunctionClass& F, const Vec& v, double tol) {
  return member_violation(F, v) <= tol;
}

// ---------------------------------------------------------------------------
// SectionOracle

struct SectionOracle::Impl {
  const FunctionClass* F = nullptr;
  SampleDesign design;
  Vec y;

  // polytope route
  std::unique_ptr<lp::Simplex<double>> spx;
  const Matrix* verts = nullptr;  // vertex route when set
  std::size_t nvars = 0;

  // ellipsoid route
  bool is_ellipsoid = false;
  const Ellipsoid* ell = nullptr;
  Vec u0;
  Matrix nullbasis;  // m x nullity
  double rfree = 0.0;
  bool ell_feasible = false;

  bool feasible_cached = false;
  bool feasible_value = false;
};

SectionOracle::SectionOracle(const FunctionClass& F, const SampleDesign& d,
                             Vec y)
    : impl_(std::make_unique<Impl>()) {
  d.validate(F.dim());
  if (y.size() != d.size()) throw DimensionError("sample count mismatch");
  impl_->F = &F;
  impl_->design = d;
  impl_->y = std::move(y);
  const std::size_t m = F.dim();

  if (const auto* el = std::get_if<Ellipsoid>(&F.body())) {
    impl_->is_ellipsoid = true;
    impl_->ell = el;
    const std::size_t ds = d.size();
    EMat R(ds, m);
    EVec rhs(ds);
    for (std::size_t j = 0; j < ds; ++j) {
      int row = d.indices[j];
      for (std::size_t c = 0; c < m; ++c) R(j, c) = el->map(row, c);
      rhs(j) = impl_->y[j] - el->center[row];
    }
    EVec u0 = EVec::Zero(m);
    EMat N;
    if (ds == 0) {
      N = EMat::Identity(m, m);
    } else {
      Eigen::JacobiSVD<EMat> svd(R,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      double smax = sv.size() ? sv(0) : 0.0;
      double rank_tol = 1e-12 * std::max(1.0, smax);
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rank_tol) ++rank;
      EVec utb = svd.matrixU().transpose() * rhs;
      for (int i = 0; i < rank; ++i)
        u0 += (utb(i) / sv(i)) * svd.matrixV().col(i);
      N = svd.matrixV().rightCols(m - rank);
      double resid = (R * u0 - rhs).cwiseAbs().maxCoeff();
      if (resid > F.feas_tol() * 10.0 + 1e-12) {
        impl_->ell_feasible = false;
        impl_->feasible_cached = true;
        impl_->feasible_value = false;
        return;
      }
    }
    double nrm = u0.norm();
    if (nrm > 1.0 + 1e-9) {
      impl_->ell_feasible = false;
      impl_->feasible_cached = true;
      impl_->feasible_value = false;
      return;
    }
    impl_->ell_feasible = true;
    impl_->feasible_cached = true;
    impl_->feasible_value = true;
    impl_->rfree = std::sqrt(std::max(0.0, 1.0 - nrm * nrm));
    impl_->u0.assign(u0.data(), u0.data() + m);
    impl_->nullbasis = from_eigen(N);
    return;
  }

  lp::Options opt;
  opt.feas_tol = F.feas_tol();

  if (const VPolytope* vp = F.vertex_view()) {
    const Matrix& V = vp->vertices;
    const std::size_t k = V.rows();
    impl_->verts = &V;
    impl_->nvars = k;
    lp::Problem prob(0);
    for (std::size_t i = 0; i < k; ++i) prob.add_var(false);
    Vec ones(k, 1.0);
    prob.add_row(lp::Sense::eq, ones, 1.0);
    for (std::size_t j = 0; j < d.size(); ++j) {
      Vec c(k, 0.0);
      for (std::size_t i = 0; i < k; ++i) c[i] = V(i, d.indices[j]);
      prob.add_row(lp::Sense::eq, std::move(c), impl_->y[j]);
    }
    impl_->spx = std::make_unique<lp::Simplex<double>>(prob, opt);
    return;
  }

  if (const auto* hp = std::get_if<HPolytope>(&F.body())) {
    const std::size_t width = hp->rows.cols();
    impl_->nvars = width;
    lp::Problem prob(0);
    for (std::size_t vix = 0; vix < width; ++vix) prob.add_var(true);
    for (std::size_t r = 0; r < hp->rows.rows(); ++r)
      prob.add_row(lp::Sense::le, hp->rows.row_vec(r), hp->bounds[r]);
    for (std::size_t j = 0; j < d.size(); ++j) {
      Vec c(width, 0.0);
      c[d.indices[j]] = 1.0;
      prob.add_row(lp::Sense::eq, std::move(c), impl_->y[j]);
    }
    impl_->spx = std::make_unique<lp::Simplex<double>>(prob, opt);
    return;
  }

  throw UnsupportedClassError(
      "sections require a convex representation (vertices, halfspaces or an "
      "ellipsoid)");
}

SectionOracle::~SectionOracle() = default;
SectionOracle::SectionOracle(SectionOracle&&) noexcept = default;

bool SectionOracle::feasible() {
  if (impl_->feasible_cached) return impl_->feasible_value;
  auto st = impl_->spx->ensure_feasible();
  if (st == lp::Status::iteration_limit)
    throw SolverError("section feasibility run hit the iteration limit");
  impl_->feasible_cached = true;
  impl_->feasible_value = (st == lp::Status::optimal);
  return impl_->feasible_value;
}

std::pair<double, double> SectionOracle::extrema(int coord) {
  auto& im = *impl_;
  if (coord < 0 || static_cast<std::size_t>(coord) >= im.F->dim())
    throw ParameterError("coordinate out of range");
  if (!feasible()) throw SolverError("section is empty");

  if (im.is_ellipsoid) {
    const std::size_t m = im.F->dim();
    Vec row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = im.ell->map(coord, j);
    double base = im.ell->center[coord] +
                  kernels::dot(row.data(), im.u0.data(), m);
    double g2 = 0.0;
    for (std::size_t c = 0; c < im.nullbasis.cols(); ++c) {
      double g = 0.0;
      for (std::size_t j = 0; j < m; ++j) g += row[j] * im.nullbasis(j, c);
      g2 += g * g;
    }
    double amp = im.rfree * std::sqrt(g2);
    return {base - amp, base + amp};
  }

  Vec chi(im.nvars, 0.0);
  if (im.verts) {
    for (std::size_t i = 0; i < im.nvars; ++i) chi[i] = (*im.verts)(i, coord);
  } else {
    chi[coord] = 1.0;
  }
  auto rmax = im.spx->maximize(chi);
  for (double& c : chi) c = -c;
  auto rmin = im.spx->maximize(chi);
  if (rmax.status != lp::Status::optimal || rmin.status != lp::Status::optimal)
    throw SolverError("section extrema LP failed");
  return {-rmin.value, rmax.value};
}

Vec SectionOracle::extremal_point(int coord, bool maximize) {
  auto& im = *impl_;
  if (!feasible()) throw SolverError("section is empty");
  const std::size_t m = im.F->dim();

  if (im.is_ellipsoid) {
    Vec row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = im.ell->map(coord, j);
    const std::size_t nullity = im.nullbasis.cols();
    Vec g(nullity, 0.0);
    double g2 = 0.0;
    for (std::size_t c = 0; c < nullity; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += row[j] * im.nullbasis(j, c);
      g[c] = acc;
      g2 += acc * acc;
    }
    Vec u = im.u0;
    if (g2 > 0.0) {
      double scl = (maximize ? 1.0 : -1.0) * im.rfree / std::sqrt(g2);
      for (std::size_t j = 0; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < nullity; ++c)
          acc += im.nullbasis(j, c) * g[c];
        u[j] += scl * acc;
      }
    }
    Vec f = matvec(im.ell->map, u);
    for (std::size_t j = 0; j < m; ++j) f[j] += im.ell->center[j];
    return f;
  }

  Vec chi(im.nvars, 0.0);
  if (im.verts) {
    for (std::size_t i = 0; i < im.nvars; ++i)
      chi[i] = (maximize ? 1.0 : -1.0) * (*im.verts)(i, coord);
  } else {
    chi[coord] = maximize ? 1.0 : -1.0;
  }
  auto res = im.spx->maximize(chi);
  if (res.status != lp::Status::optimal)
    throw SolverError("section witness LP failed");

  if (im.verts) {
    Vec f(m, 0.0);
    for (std::size_t i = 0; i < im.nvars; ++i)
      if (res.x[i] != 0.0)
        kernels::axpy(res.x[i], im.verts->row(i), f.data(), m);
    return f;
  }
  return Vec(res.x.begin(), res.x.begin() + m);
}

FeasibleSection::FeasibleSection(const FunctionClass& F, SampleDesign d,
                                 Vec y)
    : cls(&F), design(std::move(d)), values(std::move(y)) {
  oracle_ = std::make_shared<SectionOracle>(F, design, values);
  feasible_ = oracle_->feasible();
}

// ---------------------------------------------------------------------------
// Pair diameter

namespace {

// Two-copy program for asymmetric polytope bodies.
class PairProgram {
 public:
  PairProgram(const FunctionClass& F, const SampleDesign& d) : F_(F) {
    lp::Options opt;
    opt.feas_tol = F.feas_tol();

    if (const VPolytope* vp = F.vertex_view()) {
      const Matrix& V = vp->vertices;
      k_ = V.rows();
      verts_ = &V;
      lp::Problem prob(0);
      for (std::size_t i = 0; i < 2 * k_; ++i) prob.add_var(false);
      Vec so(2 * k_, 0.0);
      for (std::size_t i = 0; i < k_; ++i) so[i] = 1.0;
      prob.add_row(lp::Sense::eq, so, 1.0);
      Vec st(2 * k_, 0.0);
      for (std::size_t i = 0; i < k_; ++i) st[k_ + i] = 1.0;
      prob.add_row(lp::Sense::eq, st, 1.0);
      for (int x : d.indices) {
        Vec c(2 * k_, 0.0);
        for (std::size_t i = 0; i < k_; ++i) {
          c[i] = V(i, x);
          c[k_ + i] = -V(i, x);
        }
        prob.add_row(lp::Sense::eq, std::move(c), 0.0);
      }
      spx_ = std::make_unique<lp::Simplex<double>>(prob, opt);
      nvars_ = 2 * k_;
      return;
    }

    const auto* hp = std::get_if<HPolytope>(&F.body());
    if (!hp)
      throw UnsupportedClassError("pair program needs a polytope body");
    const std::size_t width = hp->rows.cols();
    width_ = width;
    lp::Problem prob(0);
    for (std::size_t v = 0; v < 2 * width; ++v) prob.add_var(true);
    for (std::size_t r = 0; r < hp->rows.rows(); ++r) {
      Vec c(2 * width, 0.0);
      for (std::size_t j = 0; j < width; ++j) c[j] = hp->rows(r, j);
      prob.add_row(lp::Sense::le, std::move(c), hp->bounds[r]);
    }
    for (std::size_t r = 0; r < hp->rows.rows(); ++r) {
      Vec c(2 * width, 0.0);
      for (std::size_t j = 0; j < width; ++j) c[width + j] = hp->rows(r, j);
      prob.add_row(lp::Sense::le, std::move(c), hp->bounds[r]);
    }
    for (int x : d.indices) {
      Vec c(2 * width, 0.0);
      c[x] = 1.0;
      c[width + x] = -1.0;
      prob.add_row(lp::Sense::eq, std::move(c), 0.0);
    }
    spx_ = std::make_unique<lp::Simplex<double>>(prob, opt);
    nvars_ = 2 * width;
  }

  double gap(int coord, double sign) {
    auto res = spx_->maximize(objective(coord, sign));
    if (res.status != lp::Status::optimal)
      throw SolverError("pair gap LP failed");
    return res.value;
  }

  std::pair<Vec, Vec> witness(int coord, double sign) {
    auto res = spx_->maximize(objective(coord, sign));
    if (res.status != lp::Status::optimal)
      throw SolverError("pair witness LP failed");
    const std::size_t m = F_.dim();
    Vec f(m, 0.0), g(m, 0.0);
    if (verts_) {
      for (std::size_t i = 0; i < k_; ++i) {
        if (res.x[i] != 0.0)
          kernels::axpy(res.x[i], verts_->row(i), f.data(), m);
        if (res.x[k_ + i] != 0.0)
          kernels::axpy(res.x[k_ + i], verts_->row(i), g.data(), m);
      }
    } else {
      std::copy(res.x.begin(), res.x.begin() + m, f.begin());
      std::copy(res.x.begin() + width_, res.x.begin() + width_ + m, g.begin());
    }
    return {std::move(f), std::move(g)};
  }

 private:
  Vec objective(int coord, double sign) const {
    Vec c(nvars_, 0.0);
    if (verts_) {
      for (std::size_t i = 0; i < k_; ++i) {
        c[i] = sign * (*verts_)(i, coord);
        c[k_ + i] = -sign * (*verts_)(i, coord);
      }
    } else {
      c[coord] = sign;
      c[width_ + coord] = -sign;
    }
    return c;
  }

  const FunctionClass& F_;
  const Matrix* verts_ = nullptr;
  std::size_t k_ = 0, width_ = 0, nvars_ = 0;
  std::unique_ptr<lp::Simplex<double>> spx_;
};

PairWitness ellipsoid_pair(const FunctionClass& F, const Ellipsoid& el,
                           const SampleDesign& d) {
  const std::size_t m = F.dim();
  const std::size_t ds = d.size();
  EMat N;
  if (ds == 0) {
    N = EMat::Identity(m, m);
  } else {
    EMat R(ds, m);
    for (std::size_t j = 0; j < ds; ++j)
      for (std::size_t c = 0; c < m; ++c) R(j, c) = el.map(d.indices[j], c);
    Eigen::JacobiSVD<EMat> svd(R, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    double rank_tol = 1e-12 * std::max(1.0, smax);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tol) ++rank;
    N = svd.matrixV().rightCols(m - rank);
  }
  EMat M = to_eigen(el.map);
  PairWitness best;
  best.gap = -1.0;
  EVec bestdir;
  for (std::size_t x = 0; x < m; ++x) {
    EVec g = N.transpose() * M.row(x).transpose();
    double amp = 2.0 * g.norm();
    if (amp > best.gap) {
      best.gap = amp;
      best.coord = static_cast<int>(x);
      bestdir = g.norm() > 0 ? EVec(N * g / g.norm()) : EVec(EVec::Zero(m));
    }
  }
  EVec mu = M * bestdir;
  best.f.assign(m, 0.0);
  best.g.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    best.f[i] = el.center[i] + mu(i);
    best.g[i] = el.center[i] - mu(i);
  }
  return best;
}

}  // namespace

PairWitness pair_diameter_witness(const FunctionClass& F,
                                  const SampleDesign& d) {
  d.validate(F.dim());
  if (!F.convex())
    throw UnsupportedClassError(
        "pair diameter needs a convex class; ball exponents below 1 are not "
        "supported here");
  const std::size_t m = F.dim();

  if (const auto* el = std::get_if<Ellipsoid>(&F.body()))
    return ellipsoid_pair(F, *el, d);

  if (std::get_if<PBall>(&F.body()) && !F.vertex_view())
    throw UnsupportedClassError(
        "pair diameter on a sub-1 ball exponent is not defined");

  if (F.symmetric()) {
    // For symmetric convex F the pair (f, g) maps to u = (f-g)/2 inside F
    // vanishing on the design, and back via (u, -u); one class copy suffices.
    SectionOracle sec(F, d, Vec(d.size(), 0.0));
    if (!sec.feasible()) throw SolverError("zero section empty for symmetric class");
    PairWitness best;
    best.gap = -1.0;
    for (std::size_t x = 0; x < m; ++x) {
      double hi = sec.extrema(static_cast<int>(x)).second;
      if (2.0 * hi > best.gap) {
        best.gap = 2.0 * hi;
        best.coord = static_cast<int>(x);
      }
    }
    Vec u = sec.extremal_point(best.coord, true);
    best.f = u;
    best.g = u;
    for (double& t : best.g) t = -t;
    return best;
  }

  PairProgram prog(F, d);
  double bestgap = -1.0;
  int bestc = 0;
  double bests = 1.0;
  for (std::size_t x = 0; x < m; ++x) {
    for (double s : {1.0, -1.0}) {
      double gp = prog.gap(static_cast<int>(x), s);
      if (gp > bestgap + 1e-15) {
        bestgap = gp;
        bestc = static_cast<int>(x);
        bests = s;
      }
    }
  }
  auto [f, g] = prog.witness(bestc, bests);
  PairWitness w;
  w.gap = bestgap;
  w.coord = bestc;
  w.f = std::move(f);
  w.g = std::move(g);
  return w;
}

double pair_diameter(const FunctionClass& F, const SampleDesign& d) {
  d.validate(F.dim());
  if (!F.convex())
    throw UnsupportedClassError(
        "pair diameter needs a convex class; ball exponents below 1 are not "
        "supported here");
  const std::size_t m = F.dim();

  if (const auto* el = std::get_if<Ellipsoid>(&F.body()))
    return ellipsoid_pair(F, *el, d).gap;

  if (std::get_if<PBall>(&F.body()) && !F.vertex_view())
    throw UnsupportedClassError(
        "pair diameter on a sub-1 ball exponent is not defined");

  if (F.symmetric()) {
    SectionOracle sec(F, d, Vec(d.size(), 0.0));
    if (!sec.feasible())
      throw SolverError("zero section empty for symmetric class");
    double best = 0.0;
    for (std::size_t x = 0; x < m; ++x)
      best = std::max(best, 2.0 * sec.extrema(static_cast<int>(x)).second);
    return best;
  }

  PairProgram prog(F, d);
  double best = 0.0;
  for (std::size_t x = 0; x < m; ++x)
    for (double s : {1.0, -1.0})
      best = std::max(best, prog.gap(static_cast<int>(x), s));
  return best;
}

// ---------------------------------------------------------------------------
// Validation

void validate_class(const FunctionClass& F) {
  const std::size_t m = F.dim();
  const double tol = 1e-6 * std::max(1.0, F.radius());
  Vec w(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double s : {1.0, -1.0}) {
      w[i] = s;
      auto r = support(F, w);  // throws if unbounded
      if (!std::isfinite(r.value))
        throw SolverError("support value not finite");
      if (F.symmetric()) {
        Vec neg(r.maximizer);
        for (double& t : neg) t = -t;
        if (!member(F, neg, tol))
          throw ParameterError(
              "class is flagged symmetric but a mirrored extremizer is not a "
              "member");
      }
    }
    w[i] = 0.0;
  }
}

}  // namespace widthslab

#include <algorithm>
#include <cmath>

#include "widthslab/geometry.hpp"
#include "widthslab/kernels.hpp"

namespace widthslab {

namespace {

double pnorm_of(const Vec& u, double p) {
  double s = 0.0;
  for (double x : u) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

Vec map_apply(const Matrix& m, const Vec& x) {
  Vec out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    out[i] = kernels::dot(m.row(i), x.data(), m.cols());
  return out;
}

}  // namespace

struct PointSampler::Impl {
  const FunctionClass* F = nullptr;
  Rng rng{0};
  std::uint64_t count = 0;
  std::vector<Vec> extremes;
  bool extremes_ready = false;

  // halfspace walk state
  Vec walk;          // lifted current point
  Vec inscribed;     // lifted inscribed-ball center
  bool degenerate = false;

  Vec draw_vpoly(const Matrix& V);
  Vec draw_hpoly(const HPolytope& h);
  Vec draw_ellipsoid(const Ellipsoid& e);
  Vec draw_pball(const PBall& b);
};

PointSampler::PointSampler(const FunctionClass& F, std::uint64_t seed)
    : impl_(std::make_unique<Impl>()) {
  impl_->F = &F;
  impl_->rng = Rng(seed);

  if (const auto* hp = std::get_if<HPolytope>(&F.body())) {
    // Inscribed-ball center of the lifted polytope as the walk start.
    const std::size_t L = hp->rows.cols();
    lp::Problem prob(0);
    for (std::size_t v = 0; v < L; ++v) prob.add_var(true);
    int rvar = prob.add_var(false);
    for (std::size_t r = 0; r < hp->rows.rows(); ++r) {
      Vec c(prob.nvars, 0.0);
      double nrm = 0.0;
      for (std::size_t j = 0; j < L; ++j) {
        c[j] = hp->rows(r, j);
        nrm += c[j] * c[j];
      }
      c[rvar] = std::sqrt(nrm);
      prob.add_row(lp::Sense::le, std::move(c), hp->bounds[r]);
    }
    lp::Options opt;
    opt.feas_tol = F.feas_tol();
    lp::Simplex<double> spx(prob, opt);
    Vec c(prob.nvars, 0.0);
    c[rvar] = 1.0;
    auto res = spx.maximize(c);
    if (res.status != lp::Status::optimal)
      throw SolverError("inscribed-ball LP failed");
    impl_->inscribed.assign(res.x.begin(), res.x.begin() + L);
    impl_->walk = impl_->inscribed;
    impl_->degenerate = res.value <= 1e-10 * std::max(1.0, F.radius());
  }
}

PointSampler::~PointSampler() = default;
PointSampler::PointSampler(PointSampler&&) noexcept = default;

Vec PointSampler::Impl::draw_vpoly(const Matrix& V) {
  const std::size_t k = V.rows(), m = V.cols();
  if (count % 3 == 2 && k >= 2) {
    // edge blend
    std::size_t i = rng.index(k);
    std::size_t j = rng.index(k - 1);
    if (j >= i) ++j;
    double t = rng.uniform();
    Vec f(m, 0.0);
    kernels::axpy(1.0 - t, V.row(i), f.data(), m);
    kernels::axpy(t, V.row(j), f.data(), m);
    return f;
  }
  Vec w(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double u = rng.uniform();
    while (u <= 1e-300) u = rng.uniform();
    w[i] = -std::log(u);
    total += w[i];
  }
  Vec f(m, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    kernels::axpy(w[i] / total, V.row(i), f.data(), m);
  return f;
}

Vec PointSampler::Impl::draw_hpoly(const HPolytope& h) {
  const std::size_t L = h.rows.cols(), m = F->dim();
  if (degenerate)
    return Vec(inscribed.begin(), inscribed.begin() + m);

  auto line_range = [&](const Vec& x, const Vec& d) {
    double tlo = -1e300, thi = 1e300;
    for (std::size_t r = 0; r < h.rows.rows(); ++r) {
      double ad = kernels::dot(h.rows.row(r), d.data(), L);
      double slack = h.bounds[r] - kernels::dot(h.rows.row(r), x.data(), L);
      if (ad > 1e-14) thi = std::min(thi, slack / ad);
      else if (ad < -1e-14) tlo = std::max(tlo, slack / ad);
    }
    if (tlo > 0.0) tlo = 0.0;
    if (thi < 0.0) thi = 0.0;
    return std::make_pair(tlo, thi);
  };

  auto rand_dir = [&]() {
    Vec d(L);
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (std::size_t j = 0; j < L; ++j) {
        d[j] = rng.normal();
        nrm += d[j] * d[j];
      }
    } while (nrm <= 1e-300);
    nrm = std::sqrt(nrm);
    for (double& v : d) v /= nrm;
    return d;
  };

  const std::size_t steps = 2 * L;
  for (std::size_t s = 0; s < steps; ++s) {
    Vec d = rand_dir();
    auto [tlo, thi] = line_range(walk, d);
    double t = tlo + (thi - tlo) * rng.uniform();
    // stay strictly interior so later ranges do not collapse
    t = 0.98 * t;
    for (std::size_t j = 0; j < L; ++j) walk[j] += t * d[j];
  }
  ++count;
  if (count % 2 == 0) {
    // push a copy most of the way to the boundary; staying fractionally
    // inside keeps exact-interpolation sections of the emitted point feasible
    Vec d = rand_dir();
    auto [tlo, thi] = line_range(walk, d);
    (void)tlo;
    Vec out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = walk[j] + 0.999 * thi * d[j];
    return out;
  }
  return Vec(walk.begin(), walk.begin() + m);
}

Vec PointSampler::Impl::draw_ellipsoid(const Ellipsoid& e) {
  const std::size_t m = F->dim();
  Vec u(m);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      u[j] = rng.normal();
      nrm += u[j] * u[j];
    }
  } while (nrm <= 1e-300);
  nrm = std::sqrt(nrm);
  double scale = 1.0 / nrm;
  if (count % 2 == 1)
    scale *= std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
  for (double& v : u) v *= scale;
  Vec f = map_apply(e.map, u);
  for (std::size_t j = 0; j < m; ++j) f[j] += e.center[j];
  return f;
}

Vec PointSampler::Impl::draw_pball(const PBall& b) {
  const std::size_t m = F->dim();
  Vec u(m);
  bool nonzero = false;
  for (std::size_t j = 0; j < m; ++j) {
    double g = rng.normal();
    double mag = std::pow(std::fabs(g), 1.0 / b.p);
    u[j] = g >= 0 ? mag : -mag;
    nonzero = nonzero || u[j] != 0.0;
  }
  if (!nonzero) u[0] = 1.0;
  double nrm = pnorm_of(u, b.p);
  double scale = 1.0 / nrm;
  if (count % 2 == 1)
    scale *= std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
  for (double& v : u) v *= scale;
  return map_apply(b.map, u);
}

Vec PointSampler::draw() {
  auto& im = *impl_;
  const auto& body = im.F->body();
  Vec out;
  if (const auto* vp = std::get_if<VPolytope>(&body)) {
    out = im.draw_vpoly(vp->vertices);
    ++im.count;
  } else if (const auto* hp = std::get_if<HPolytope>(&body)) {
    out = im.draw_hpoly(*hp);  // advances count itself
  } else if (const auto* el = std::get_if<Ellipsoid>(&body)) {
    out = im.draw_ellipsoid(*el);
    ++im.count;
  } else {
    out = im.draw_pball(std::get<PBall>(body));
    ++im.count;
  }
  return out;
}

const std::vector<Vec>& PointSampler::extreme_points() {
  auto& im = *impl_;
  if (im.extremes_ready) return im.extremes;
  const FunctionClass& F = *im.F;
  const std::size_t m = F.dim();

  auto push_unique = [&](Vec v) {
    for (const auto& e : im.extremes)
      if (kernels::linf_dist(e.data(), v.data(), m) <= 1e-12) return;
    im.extremes.push_back(std::move(v));
  };

  if (const VPolytope* vp = F.vertex_view()) {
    const std::size_t cap = 4096;
    for (std::size_t i = 0; i < vp->vertices.rows() && i < cap; ++i)
      push_unique(vp->vertices.row_vec(i));
  }
  Vec w(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (double s : {1.0, -1.0}) {
      w[i] = s;
      push_unique(support(F, w).maximizer);
    }
    w[i] = 0.0;
  }
  im.extremes_ready = true;
  return im.extremes;
}

}  // namespace widthslab

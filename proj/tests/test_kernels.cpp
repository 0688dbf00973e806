#include <doctest.h>

#include <cmath>
#include <vector>

#include "widthslab/common.hpp"
#include "widthslab/kernels.hpp"

using namespace widthslab;
namespace k = widthslab::kernels;

namespace {

struct BackendGuard {
  k::Backend saved;
  BackendGuard() : saved(k::active_backend()) {}
  ~BackendGuard() { k::force_backend(saved); }
};

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels on small hand inputs") {
  BackendGuard guard;
  k::force_backend(k::Backend::scalar);

  const double v[] = {1.0, -3.5, 2.0, 3.5};
  CHECK(k::max_abs(v, 4) == 3.5);
  CHECK(k::max_abs(v, 0) == 0.0);

  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {0.5, 4.0, 3.0};
  CHECK(k::linf_dist(a, b, 3) == 2.0);
  CHECK(k::dot(a, b, 3) == doctest::Approx(0.5 + 8.0 + 9.0));

  double y[] = {1.0, 1.0, 1.0};
  k::axpy(2.0, a, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 7.0);

  const double ties[] = {2.0, 5.0, 5.0, 1.0};
  CHECK(k::argmax(ties, 4) == 1);  // ties go to the lowest index
  const double single[] = {-7.0};
  CHECK(k::argmax(single, 1) == 0);
}

TEST_CASE("min_update_linf keeps the smaller distance") {
  BackendGuard guard;
  k::force_backend(k::Backend::scalar);

  // two points in R^3
  const double pts[] = {0.0, 0.0, 0.0, 1.0, 2.0, 3.0};
  const double center[] = {1.0, 0.0, 0.0};
  double dist[] = {0.5, 100.0};
  k::min_update_linf(pts, 2, 3, center, dist);
  CHECK(dist[0] == 0.5);  // old value 0.5 < linf 1.0
  CHECK(dist[1] == 3.0);  // linf((1,2,3),(1,0,0)) = 3
}

TEST_CASE("avx2 kernels agree with scalar on random inputs") {
  if (!k::avx2_supported()) return;
  BackendGuard guard;
  Rng rng(20240817);

  for (int trial = 0; trial < 50; ++trial) {
    // odd lengths exercise the vector tail handling
    const std::size_t n = 1 + rng.index(67);
    auto a = random_vec(rng, n, 10.0);
    auto b = random_vec(rng, n, 10.0);

    k::force_backend(k::Backend::scalar);
    const double m_s = k::max_abs(a.data(), n);
    const double l_s = k::linf_dist(a.data(), b.data(), n);
    const double d_s = k::dot(a.data(), b.data(), n);
    const std::size_t am_s = k::argmax(a.data(), n);
    auto y_s = b;
    k::axpy(1.5, a.data(), y_s.data(), n);

    k::force_backend(k::Backend::avx2);
    const double m_v = k::max_abs(a.data(), n);
    const double l_v = k::linf_dist(a.data(), b.data(), n);
    const double d_v = k::dot(a.data(), b.data(), n);
    const std::size_t am_v = k::argmax(a.data(), n);
    auto y_v = b;
    k::axpy(1.5, a.data(), y_v.data(), n);

    CHECK(m_s == m_v);
    CHECK(l_s == l_v);
    CHECK(am_s == am_v);
    CHECK(d_v == doctest::Approx(d_s).epsilon(1e-13));
    for (std::size_t i = 0; i < n; ++i) CHECK(y_s[i] == y_v[i]);
  }
}

TEST_CASE("avx2 min_update_linf matches scalar") {
  if (!k::avx2_supported()) return;
  BackendGuard guard;
  Rng rng(7);

  const std::size_t count = 33, dim = 11;
  auto pts = random_vec(rng, count * dim, 5.0);
  auto center = random_vec(rng, dim, 5.0);
  std::vector<double> d0(count);
  for (auto& x : d0) x = rng.uniform(0.0, 8.0);

  auto ds = d0;
  k::force_backend(k::Backend::scalar);
  k::min_update_linf(pts.data(), count, dim, center.data(), ds.data());
  auto dv = d0;
  k::force_backend(k::Backend::avx2);
  k::min_update_linf(pts.data(), count, dim, center.data(), dv.data());
  for (std::size_t i = 0; i < count; ++i) CHECK(ds[i] == dv[i]);
}

TEST_CASE("argmax ties resolve identically across backends") {
  if (!k::avx2_supported()) return;
  BackendGuard guard;

  std::vector<double> v(40, 1.0);
  v[13] = 2.0;
  v[14] = 2.0;
  v[31] = 2.0;
  k::force_backend(k::Backend::scalar);
  const auto s = k::argmax(v.data(), v.size());
  k::force_backend(k::Backend::avx2);
  const auto a = k::argmax(v.data(), v.size());
  CHECK(s == 13);
  CHECK(a == 13);
}

#include "widthslab/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

#include "widthslab/common.hpp"

namespace widthslab::kernels {

namespace detail {

double max_abs_scalar(const double* v, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(v[i]);
    if (a > m) m = a;
  }
  return m;
}

double linf_dist_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void min_update_linf_scalar(const double* points, std::size_t count,
                            std::size_t dim, const double* center,
                            double* dist) {
  for (std::size_t i = 0; i < count; ++i) {
    double d = linf_dist_scalar(points + i * dim, center, dim);
    if (d < dist[i]) dist[i] = d;
  }
}

// Defined in kernels_avx2.cpp; null on non-x86 builds.
double max_abs_avx2(const double*, std::size_t);
double linf_dist_avx2(const double*, const double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void min_update_linf_avx2(const double*, std::size_t, std::size_t,
                          const double*, double*);
bool cpu_has_avx2();

struct Table {
  double (*max_abs)(const double*, std::size_t);
  double (*linf_dist)(const double*, const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*min_update_linf)(const double*, std::size_t, std::size_t,
                          const double*, double*);
};

const Table kScalarTable = {max_abs_scalar, linf_dist_scalar, dot_scalar,
                            axpy_scalar, min_update_linf_scalar};
const Table kAvx2Table = {max_abs_avx2, linf_dist_avx2, dot_avx2, axpy_avx2,
                          min_update_linf_avx2};

struct State {
  Backend backend;
  const Table* table;
};

State make_initial_state() {
  bool have = cpu_has_avx2();
  Backend b = have ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("WIDTHSLAB_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) b = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && have) b = Backend::avx2;
  }
  return {b, b == Backend::avx2 ? &kAvx2Table : &kScalarTable};
}

State& state() {
  static State s = make_initial_state();
  return s;
}

}  // namespace detail

Backend active_backend() { return detail::state().backend; }

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_supported() { return detail::cpu_has_avx2(); }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !detail::cpu_has_avx2())
    throw ParameterError("avx2 backend not supported on this CPU");
  detail::state() = {b, b == Backend::avx2 ? &detail::kAvx2Table
                                           : &detail::kScalarTable};
}

double max_abs(const double* v, std::size_t n) {
  return detail::state().table->max_abs(v, n);
}

double linf_dist(const double* a, const double* b, std::size_t n) {
  return detail::state().table->linf_dist(a, b, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return detail::state().table->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  detail::state().table->axpy(alpha, x, y, n);
}

void min_update_linf(const double* points, std::size_t count, std::size_t dim,
                     const double* center, double* dist) {
  detail::state().table->min_update_linf(points, count, dim, center, dist);
}

std::size_t argmax(const double* v, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace widthslab::kernels

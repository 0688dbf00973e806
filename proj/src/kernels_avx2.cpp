#include <cstddef>

// AVX2 variants. Compiled with per-function target attributes so the TU
// builds with baseline flags; nothing here runs unless dispatch selected
// avx2 at startup. abs/max/min and the mul+add in axpy are elementwise IEEE
// operations, so results match the scalar versions bit for bit; dot keeps
// four accumulators and only the summation order differs.

#if defined(__x86_64__) || defined(_M_X64)
#define WIDTHSLAB_X86 1
#include <immintrin.h>
#else
#define WIDTHSLAB_X86 0
#endif

namespace widthslab::kernels::detail {

#if WIDTHSLAB_X86

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

namespace {

__attribute__((target("avx2"))) inline __m256d abs_pd(__m256d x) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(mask, x);
}

__attribute__((target("avx2"))) inline double hmax_pd(__m256d x) {
  __m128d lo = _mm256_castpd256_pd128(x);
  __m128d hi = _mm256_extractf128_pd(x, 1);
  __m128d m = _mm_max_pd(lo, hi);
  __m128d s = _mm_unpackhi_pd(m, m);
  return _mm_cvtsd_f64(_mm_max_sd(m, s));
}

}  // namespace

__attribute__((target("avx2")))
double max_abs_avx2(const double* v, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(v + i)));
  double m = hmax_pd(acc);
  for (; i < n; ++i) {
    double a = v[i] < 0 ? -v[i] : v[i];
    if (a > m) m = a;
  }
  return m;
}

__attribute__((target("avx2")))
double linf_dist_avx2(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, abs_pd(d));
  }
  double m = hmax_pd(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    if (d < 0) d = -d;
    if (d > m) m = d;
  }
  return m;
}

__attribute__((target("avx2")))
double dot_avx2(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc,
                        _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                      _mm256_loadu_pd(b + i)));
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  double out = _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

__attribute__((target("avx2")))
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), t));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2")))
void min_update_linf_avx2(const double* points, std::size_t count,
                          std::size_t dim, const double* center,
                          double* dist) {
  for (std::size_t r = 0; r < count; ++r) {
    const double* p = points + r * dim;
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= dim; i += 4) {
      __m256d d =
          _mm256_sub_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(center + i));
      acc = _mm256_max_pd(acc, abs_pd(d));
    }
    double m = hmax_pd(acc);
    for (; i < dim; ++i) {
      double d = p[i] - center[i];
      if (d < 0) d = -d;
      if (d > m) m = d;
    }
    if (m < dist[r]) dist[r] = m;
  }
}

#else  // !WIDTHSLAB_X86

bool cpu_has_avx2() { return false; }

double max_abs_avx2(const double*, std::size_t) { return 0.0; }
double linf_dist_avx2(const double*, const double*, std::size_t) { return 0.0; }
double dot_avx2(const double*, const double*, std::size_t) { return 0.0; }
void axpy_avx2(double, const double*, double*, std::size_t) {}
void min_update_linf_avx2(const double*, std::size_t, std::size_t,
                          const double*, double*) {}

#endif

}  // namespace widthslab::kernels::detail

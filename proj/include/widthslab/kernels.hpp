#pragma once

#include <cstddef>

// Flat array kernels used by the hot loops (simplex pivots, packing
// separations, k-center updates). Each has a scalar reference version and an
// AVX2 version; the active backend is resolved once at startup from CPU
// capabilities and can be overridden with WIDTHSLAB_KERNELS=scalar|avx2 or
// force_backend(). max/abs-based kernels and axpy are bit-identical across
// backends; dot differs only by summation order.

namespace widthslab::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();

/// Select a backend explicitly (tests). Throws if unsupported on this CPU.
void force_backend(Backend b);

/// max_i |v_i|; 0 for empty input.
double max_abs(const double* v, std::size_t n);

/// max_i |a_i - b_i|; 0 for empty input.
double linf_dist(const double* a, const double* b, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// For each row i of `points` (count x dim, row-major):
/// dist[i] = min(dist[i], linf(points[i], center)).
void min_update_linf(const double* points, std::size_t count, std::size_t dim,
                     const double* center, double* dist);

/// Index of the largest entry, ties to the lowest index. n must be > 0.
std::size_t argmax(const double* v, std::size_t n);

}  // namespace widthslab::kernels

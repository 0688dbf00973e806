#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace widthslab {

using Vec = std::vector<double>;

/// Dense row-major matrix. Rows are contiguous so they can be handed to the
/// flat kernels directly.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  Vec row_vec(std::size_t i) const {
    return Vec(row(i), row(i) + cols_);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad sizes, mismatched dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// Invalid argument values (zero trials, bad exponent, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Enumeration or net size above the configured cap.
struct BudgetError : Error {
  using Error::Error;
};

/// Operation not defined for this class representation.
struct UnsupportedClassError : Error {
  using Error::Error;
};

/// Singular or near-singular maps.
struct ConditioningError : Error {
  using Error::Error;
};

/// LP backend gave up (unbounded where boundedness was required,
/// iteration limit, numerical breakdown).
struct SolverError : Error {
  using Error::Error;
};

/// Deterministic RNG. mt19937_64 supplies the bits; the mappings to doubles
/// are spelled out here so streams do not depend on libstdc++ internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// C(m, n) clamped at cap+1 so callers can compare against a budget without
/// overflow.
inline std::uint64_t binomial_capped(std::uint64_t m, std::uint64_t n,
                                     std::uint64_t cap) {
  if (n > m) return 0;
  if (n > m - n) n = m - n;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    acc = acc * (m - i) / (i + 1);
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace widthslab

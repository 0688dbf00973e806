#pragma once

#include <cstdint>
#include <vector>

#include "widthslab/common.hpp"

// Dense two-phase simplex, internal to the project. One feasible system can
// be re-optimized for many objectives without repeating phase 1, which is the
// dominant usage pattern here (per-coordinate extrema over one section).
// The same template runs on double (tolerance-based) and on exact rationals
// (lp_exact.hpp) for small cross-check instances.

namespace widthslab::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

enum class Sense { le, eq };

struct Options {
  double feas_tol = 1e-9;   // phase-1 acceptance, scaled by problem magnitude
  double opt_tol = 1e-9;    // reduced-cost threshold
  long max_iters = -1;      // < 0: derived from problem size
};

/// maximize c.x  s.t.  rows(le/eq), x_i >= 0 unless marked free.
struct Problem {
  int nvars = 0;
  std::vector<std::uint8_t> is_free;
  std::vector<Vec> row_coeffs;
  Vec row_rhs;
  std::vector<Sense> row_sense;

  explicit Problem(int n = 0) : nvars(n), is_free(n, 0) {}

  int add_var(bool free_sign) {
    is_free.push_back(free_sign ? 1 : 0);
    return nvars++;
  }

  void add_row(Sense s, Vec coeffs, double rhs) {
    if (static_cast<int>(coeffs.size()) != nvars)
      throw DimensionError("lp row width mismatch");
    row_coeffs.push_back(std::move(coeffs));
    row_rhs.push_back(rhs);
    row_sense.push_back(s);
  }

  std::size_t rows() const { return row_coeffs.size(); }
};

template <class T>
struct Result {
  Status status = Status::infeasible;
  T value{};
  std::vector<T> x;
};

template <class T>
class Simplex {
 public:
  explicit Simplex(const Problem& p, Options opt = {});

  /// Phase 1 only; cached. optimal here means "feasible".
  Status ensure_feasible();

  /// Re-optimizes from the current basis; c lives in original variable space.
  Result<T> maximize(const Vec& c);

  Result<T> maximize_coord(int var, double sign);

  long iterations() const { return total_iters_; }

 private:
  T* row(int i) { return tab_.data() + static_cast<std::size_t>(i) * stride_; }
  const T* row(int i) const {
    return tab_.data() + static_cast<std::size_t>(i) * stride_;
  }

  void set_objective_from_cols(const std::vector<T>& c_col);
  Status run_to_optimal();
  void pivot(int r, int c);
  int price(bool bland) const;
  int ratio_row(int col) const;

  int nvars_ = 0;
  int nrows_ = 0;
  int ncols_ = 0;       // structural + slack + artificial
  int art_begin_ = 0;   // first artificial column
  std::size_t stride_ = 0;
  std::vector<int> pos_col_, neg_col_;
  std::vector<T> tab_;  // (nrows_+1) x (ncols_+1); last row objective
  std::vector<int> basis_;
  std::vector<int> row_of_col_;
  Options opt_;
  T feas_eps_{}, opt_eps_{}, pivot_eps_{};
  long iter_cap_ = 0;
  long total_iters_ = 0;
  bool phase1_done_ = false;
  Status feas_status_ = Status::iteration_limit;
};

using SimplexD = Simplex<double>;

extern template class Simplex<double>;

}  // namespace widthslab::lp

#pragma once

#include <cmath>
#include <cstdlib>
#include <type_traits>

#include "widthslab/kernels.hpp"
#include "widthslab/lp.hpp"

// Shared template body for Simplex<double> and Simplex<Rational>. Included
// only by the two instantiating TUs.

namespace widthslab::lp {

namespace detail {

template <class T>
inline double to_double(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return static_cast<double>(v);
  }
}

template <class T>
inline T abs_val(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::fabs(v);
  } else {
    return v < 0 ? T(-v) : v;
  }
}

}  // namespace detail

template <class T>
Simplex<T>::Simplex(const Problem& p, Options opt) : opt_(opt) {
  nvars_ = p.nvars;
  nrows_ = static_cast<int>(p.rows());
  pos_col_.assign(nvars_, -1);
  neg_col_.assign(nvars_, -1);

  int col = 0;
  for (int v = 0; v < nvars_; ++v) {
    pos_col_[v] = col++;
    if (p.is_free[v]) neg_col_[v] = col++;
  }
  const int structural = col;

  // Normalize rhs >= 0; rows then need a slack (le), a surplus plus an
  // artificial (flipped le), or an artificial (eq).
  enum class K { le, ge, eq };
  std::vector<K> kind(nrows_);
  std::vector<int> slack_col(nrows_, -1), art_col(nrows_, -1);
  int n_slack = 0, n_art = 0;
  for (int i = 0; i < nrows_; ++i) {
    bool neg = p.row_rhs[i] < 0.0;
    if (p.row_sense[i] == Sense::eq) {
      kind[i] = K::eq;
      ++n_art;
    } else if (!neg) {
      kind[i] = K::le;
      ++n_slack;
    } else {
      kind[i] = K::ge;
      ++n_slack;
      ++n_art;
    }
  }
  art_begin_ = structural + n_slack;
  ncols_ = art_begin_ + n_art;
  stride_ = static_cast<std::size_t>(ncols_) + 1;

  tab_.assign(static_cast<std::size_t>(nrows_ + 1) * stride_, T(0));
  basis_.assign(nrows_, -1);
  row_of_col_.assign(ncols_, -1);

  double scale = 1.0;
  int next_slack = structural, next_art = art_begin_;
  for (int i = 0; i < nrows_; ++i) {
    const bool neg = p.row_rhs[i] < 0.0;
    const double sgn = neg ? -1.0 : 1.0;
    T* r = row(i);
    for (int v = 0; v < nvars_; ++v) {
      double a = sgn * p.row_coeffs[i][v];
      if (a == 0.0) continue;
      if (std::fabs(a) > scale) scale = std::fabs(a);
      r[pos_col_[v]] = T(a);
      if (neg_col_[v] >= 0) r[neg_col_[v]] = T(-a);
    }
    double b = sgn * p.row_rhs[i];
    if (std::fabs(b) > scale) scale = std::fabs(b);
    r[ncols_] = T(b);

    switch (kind[i]) {
      case K::le:
        slack_col[i] = next_slack++;
        r[slack_col[i]] = T(1);
        basis_[i] = slack_col[i];
        break;
      case K::ge:
        slack_col[i] = next_slack++;
        r[slack_col[i]] = T(-1);
        art_col[i] = next_art++;
        r[art_col[i]] = T(1);
        basis_[i] = art_col[i];
        break;
      case K::eq:
        art_col[i] = next_art++;
        r[art_col[i]] = T(1);
        basis_[i] = art_col[i];
        break;
    }
    row_of_col_[basis_[i]] = i;
  }

  if constexpr (std::is_same_v<T, double>) {
    feas_eps_ = opt_.feas_tol * scale;
    opt_eps_ = opt_.opt_tol;
    pivot_eps_ = 1e-11 * scale;
  } else {
    feas_eps_ = T(0);
    opt_eps_ = T(0);
    pivot_eps_ = T(0);
  }
  iter_cap_ = opt_.max_iters > 0
                  ? opt_.max_iters
                  : 200 + 25L * (nrows_ + ncols_);
}

template <class T>
void Simplex<T>::set_objective_from_cols(const std::vector<T>& c_col) {
  T* obj = row(nrows_);
  for (int j = 0; j < ncols_; ++j) obj[j] = c_col[j];
  obj[ncols_] = T(0);
  for (int i = 0; i < nrows_; ++i) {
    const T cb = c_col[basis_[i]];
    if (cb == T(0)) continue;
    if constexpr (std::is_same_v<T, double>) {
      kernels::axpy(-cb, row(i), obj, stride_);
    } else {
      const T* ri = row(i);
      for (std::size_t j = 0; j < stride_; ++j) obj[j] -= cb * ri[j];
    }
  }
  // Basic columns must read exactly zero so pricing never revisits them.
  for (int i = 0; i < nrows_; ++i) obj[basis_[i]] = T(0);
}

template <class T>
int Simplex<T>::price(bool bland) const {
  const T* obj = row(nrows_);
  if (bland) {
    for (int j = 0; j < art_begin_; ++j)
      if (obj[j] > opt_eps_) return j;
    return -1;
  }
  int best = -1;
  for (int j = 0; j < art_begin_; ++j)
    if (obj[j] > opt_eps_ && (best < 0 || obj[j] > obj[best])) best = j;
  return best;
}

template <class T>
int Simplex<T>::ratio_row(int col) const {
  int best = -1;
  T best_ratio{};
  for (int i = 0; i < nrows_; ++i) {
    const T a = row(i)[col];
    if (!(a > pivot_eps_)) continue;
    T ratio = row(i)[ncols_] / a;
    if (ratio < T(0)) ratio = T(0);
    if (best < 0 || ratio < best_ratio ||
        (ratio == best_ratio && basis_[i] < basis_[best])) {
      best = i;
      best_ratio = ratio;
    }
  }
  return best;
}

template <class T>
void Simplex<T>::pivot(int r, int c) {
  T* pr = row(r);
  const T piv = pr[c];
  for (std::size_t j = 0; j < stride_; ++j) pr[j] /= piv;
  pr[c] = T(1);
  for (int i = 0; i <= nrows_; ++i) {
    if (i == r) continue;
    T* ri = row(i);
    const T f = ri[c];
    if (f == T(0)) continue;
    if constexpr (std::is_same_v<T, double>) {
      kernels::axpy(-f, pr, ri, stride_);
    } else {
      for (std::size_t j = 0; j < stride_; ++j) ri[j] -= f * pr[j];
    }
    ri[c] = T(0);
  }
  if constexpr (std::is_same_v<T, double>) {
    // Roundoff can push a basic value slightly negative; clamp so the ratio
    // test keeps seeing a feasible tableau.
    for (int i = 0; i < nrows_; ++i) {
      T& b = row(i)[ncols_];
      if (b < T(0) && b > -feas_eps_) b = T(0);
    }
  }
  row_of_col_[basis_[r]] = -1;
  basis_[r] = c;
  row_of_col_[c] = r;
}

template <class T>
Status Simplex<T>::run_to_optimal() {
  bool bland = false;
  long since_progress = 0;
  T last_val = row(nrows_)[ncols_];
  const long stall_window = 2L * nrows_ + 16;

  for (long it = 0; it < iter_cap_; ++it) {
    const int c = price(bland);
    if (c < 0) return Status::optimal;
    const int r = ratio_row(c);
    if (r < 0) return Status::unbounded;
    pivot(r, c);
    ++total_iters_;

    const T cur = row(nrows_)[ncols_];
    bool progressed;
    if constexpr (std::is_same_v<T, double>) {
      progressed = std::fabs(cur - last_val) >
                   1e-14 * (1.0 + std::fabs(detail::to_double<T>(cur)));
    } else {
      progressed = cur != last_val;
    }
    if (progressed) {
      since_progress = 0;
      last_val = cur;
    } else if (++since_progress > stall_window) {
      bland = true;
    }
  }
  return Status::iteration_limit;
}

template <class T>
Status Simplex<T>::ensure_feasible() {
  if (phase1_done_) return feas_status_;
  phase1_done_ = true;

  std::vector<T> c_col(ncols_, T(0));
  for (int j = art_begin_; j < ncols_; ++j) c_col[j] = T(-1);
  set_objective_from_cols(c_col);

  // Phase-1 pricing may enter any column, artificials included (they only
  // ever leave). price() stops at art_begin_, which is what we want: an
  // artificial re-entering never helps the phase-1 objective.
  Status st = run_to_optimal();
  if (st == Status::iteration_limit) {
    feas_status_ = st;
    return st;
  }
  // The objective cell holds -z; phase 1 maximizes -sum(artificials), so the
  // cell is the leftover artificial mass itself.
  const T resid = row(nrows_)[ncols_];
  if (resid > feas_eps_) {
    feas_status_ = Status::infeasible;
    return feas_status_;
  }

  // Drive leftover artificials out of the basis where possible; rows where
  // no pivot exists are redundant and stay pinned at zero.
  for (int i = 0; i < nrows_; ++i) {
    if (basis_[i] < art_begin_) continue;
    const T* ri = row(i);
    for (int j = 0; j < art_begin_; ++j) {
      if (detail::abs_val(ri[j]) > pivot_eps_) {
        pivot(i, j);
        break;
      }
    }
  }
  feas_status_ = Status::optimal;
  return feas_status_;
}

template <class T>
Result<T> Simplex<T>::maximize(const Vec& c) {
  if (static_cast<int>(c.size()) != nvars_)
    throw DimensionError("objective width mismatch");
  Result<T> res;
  const Status feas = ensure_feasible();
  if (feas != Status::optimal) {
    res.status = feas;
    return res;
  }

  std::vector<T> c_col(ncols_, T(0));
  for (int v = 0; v < nvars_; ++v) {
    if (c[v] == 0.0) continue;
    c_col[pos_col_[v]] = T(c[v]);
    if (neg_col_[v] >= 0) c_col[neg_col_[v]] = T(-c[v]);
  }
  set_objective_from_cols(c_col);
  res.status = run_to_optimal();
  if (res.status != Status::optimal) return res;

  res.value = -row(nrows_)[ncols_];  // objective cell holds -z
  res.x.assign(nvars_, T(0));
  for (int v = 0; v < nvars_; ++v) {
    T val{};
    if (int rp = row_of_col_[pos_col_[v]]; rp >= 0) val = row(rp)[ncols_];
    if (neg_col_[v] >= 0)
      if (int rn = row_of_col_[neg_col_[v]]; rn >= 0) val -= row(rn)[ncols_];
    res.x[v] = val;
  }
  return res;
}

template <class T>
Result<T> Simplex<T>::maximize_coord(int var, double sign) {
  Vec c(nvars_, 0.0);
  c.at(var) = sign;
  return maximize(c);
}

}  // namespace widthslab::lp

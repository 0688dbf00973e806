#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "widthslab/lp.hpp"

// Exact-rational instantiation of the simplex. Double inputs convert to
// rationals without rounding, so agreement between the two instantiations is
// a genuine cross-check of the floating-point pivoting, not of the data.
// Intended for small vertex-representation instances (m <= 8, k <= 16).

namespace widthslab::lp {

using Rational = boost::multiprecision::cpp_rational;

extern template class Simplex<Rational>;

inline double rational_to_double(const Rational& r) {
  return static_cast<double>(r);
}

}  // namespace widthslab::lp

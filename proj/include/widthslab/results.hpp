#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "widthslab/common.hpp"

// Result records shared by the solvers and the command line front end, plus
// the CSV serialization the tools emit.

namespace widthslab {

/// Two-sided enclosure of a quantity. Both endpoints come from certified
/// procedures; which ones is recorded in the method fields.
struct CertifiedInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::string lo_method;
  std::string hi_method;
};

/// Builds an interval and checks the invariants lo >= 0 and lo <= hi + 1e-9.
CertifiedInterval certified_interval(double lo, double hi,
                                     std::string lo_method,
                                     std::string hi_method);

/// Exact value: lo = hi, one method.
CertifiedInterval exact_interval(double value, const std::string& method);

/// One computed quantity for one class and one budget n. Quantities are
/// "g", "g0", "eps", "phi" and "d_ub". design is populated only for g and
/// g0 (the optimal node set); runtime_ms < 0 means timing was not recorded
/// and the CSV cell stays empty so identical runs stay byte identical.
struct QuantityResult {
  std::string class_id;
  std::string quantity;
  int n = 0;
  CertifiedInterval interval;
  std::vector<int> design;
  std::uint64_t seed = 0;
  double runtime_ms = -1.0;
};

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_value(double v);

/// Header line for result tables.
std::string csv_header();

/// One CSV line; values at full precision, design joined with ';'.
std::string csv_row(const QuantityResult& r);

}  // namespace widthslab

#include "widthslab/results.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace widthslab {

CertifiedInterval certified_interval(double lo, double hi,
                                     std::string lo_method,
                                     std::string hi_method) {
  if (!(lo >= 0.0))
    throw SolverError("certified interval has a negative lower bound");
  if (!(lo <= hi + 1e-9))
    throw SolverError("certified interval endpoints crossed");
  CertifiedInterval iv;
  iv.lo = lo;
  iv.hi = hi;
  iv.lo_method = std::move(lo_method);
  iv.hi_method = std::move(hi_method);
  return iv;
}

CertifiedInterval exact_interval(double value, const std::string& method) {
  return certified_interval(value, value, method, method);
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header() {
  return "class_id,quantity,n,lo,hi,method,design,seed,runtime_ms";
}

std::string csv_row(const QuantityResult& r) {
  std::ostringstream os;
  std::string method = r.interval.lo_method == r.interval.hi_method
                           ? r.interval.lo_method
                           : r.interval.lo_method + "|" + r.interval.hi_method;
  os << r.class_id << ',' << r.quantity << ',' << r.n << ','
     << format_value(r.interval.lo) << ',' << format_value(r.interval.hi)
     << ',' << method << ',';
  for (std::size_t i = 0; i < r.design.size(); ++i) {
    if (i) os << ';';
    os << r.design[i];
  }
  os << ',' << r.seed << ',';
  if (r.runtime_ms >= 0.0) os << format_value(r.runtime_ms);
  return os.str();
}

}  // namespace widthslab

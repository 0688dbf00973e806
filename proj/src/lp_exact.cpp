#include "widthslab/lp_exact.hpp"

#include "simplex_impl.hpp"

namespace widthslab::lp {

template class Simplex<Rational>;

}  // namespace widthslab::lp

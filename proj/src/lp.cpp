#include "widthslab/lp.hpp"

#include "simplex_impl.hpp"

namespace widthslab::lp {

template class Simplex<double>;

}  // namespace widthslab::lp

#pragma once

#include "widthslab/geometry.hpp"

// Exact-arithmetic reruns of the core floating-point searches, for small
// vertex instances. Agreement here checks the pivoting, not the data: the
// doubles convert to rationals without rounding.

namespace widthslab {

/// Pair diameter over a design, recomputed with rational pivoting on the
/// two-copy agreement program. Vertex classes with dim <= 8 and at most 16
/// vertices only; anything bigger throws ParameterError.
double pair_diameter_rational(const FunctionClass& F, const SampleDesign& d);

}  // namespace widthslab

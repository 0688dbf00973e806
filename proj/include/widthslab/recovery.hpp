#pragma once

#include <cstdint>

#include "widthslab/geometry.hpp"

// Optimal recovery from n exact point samples. The reconstruction is the
// coordinatewise interval midpoint of the data-consistent section, which is
// sup-norm optimal; its worst case over a design is half the largest pair
// gap, and minimizing over designs gives the sampling number.

namespace widthslab {

struct ChebyshevResult {
  Vec center;
  double radius = 0.0;  // half the widest coordinate interval
};

ChebyshevResult chebyshev_center(SectionOracle& section, std::size_t dim);

/// Midpoint reconstruction from samples y on the design. An empty section
/// (data no class member matches) recovers the zero function.
Vec recover(const FunctionClass& F, const SampleDesign& design, const Vec& y);

struct DiameterResult {
  double value = 0.0;
  SampleDesign design;
  PairWitness witness;
  std::uint64_t designs_tried = 0;
  bool heuristic = false;
};

/// min over n-point designs of the largest gap between class members agreeing
/// on the design. Exhaustive in lexicographic order unless `heuristic`, which
/// grows the design greedily one node at a time. Exhaustive runs refuse to
/// start when C(m, n) exceeds `budget`. Quasinorm balls with a diagonal map
/// skip the search: pinning any coordinate of such a ball to zero kills it,
/// so the optimal design keeps the n largest diagonal entries and the gap is
/// twice the next one.
DiameterResult diameter_of_information(const FunctionClass& F, int n,
                                       std::uint64_t budget,
                                       bool heuristic = false);

/// Same search, value halved (the recovery radius).
DiameterResult sampling_number(const FunctionClass& F, int n,
                               std::uint64_t budget, bool heuristic = false);

struct ProbeResult {
  double max_error = 0.0;
  double mean_error = 0.0;
  int trials = 0;
};

/// Draw class members, sample them on the design, reconstruct by midpoint,
/// and report the realized sup-norm errors.
ProbeResult recovery_error_probe(const FunctionClass& F,
                                 const SampleDesign& design, int trials,
                                 std::uint64_t seed);

}  // namespace widthslab

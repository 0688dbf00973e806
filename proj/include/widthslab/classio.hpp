#pragma once

#include <string>

#include "widthslab/geometry.hpp"

// JSON class descriptions. Explicit bodies carry their data inline;
// shorthand types defer to the builders. Anything missing, inconsistent or
// unparsable throws (ParameterError / DimensionError), which the command
// line maps to the malformed-input exit code.
//
//   {"type": "vpolytope", "vertices": [[...], ...], "symmetric": true}
//   {"type": "hpolytope", "m": 3, "rows": [[...], ...], "bounds": [...],
//    "aux": 2}
//   {"type": "ellipsoid", "center": [...], "map": [[...], ...]}
//   {"type": "pball", "p": 0.5, "map": [[...], ...]}
//   {"type": "sobolev", "m": 32, "s": 1, "p": "inf"}
//   {"type": "lpball", "m": 4, "p": 1}
//   {"type": "random_vpolytope", "m": 6, "k": 12, "radius": 1.0,
//    "seed": 7, "symmetrize": true}
//
// Optional everywhere: "id" (string), "symmetric" (bool), and "convex"
// (bool) which force-overrides the convexity the body implies; the override
// exists so tests can feed the verifier classes whose description lies.

namespace widthslab {

FunctionClass class_from_json(const std::string& text);
FunctionClass load_class(const std::string& path);

}  // namespace widthslab

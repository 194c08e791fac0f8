#pragma once

#include <string>
#include <string_view>

#include "chaosrng/map.hpp"

namespace chaosrng {

// Custom map definitions:
//   {"label": "...",
//    "branches": [{"kind": "affine", "domain": [a,b], "slope": s, "intercept": c},
//                 {"kind": "log2-affine", "domain": [a,b], "scale": p, "shift": q,
//                  "offset": k}, ...]}
// Throws ConfigError on malformed input.
PiecewiseMap map_from_json(std::string_view text);
std::string map_to_json(const PiecewiseMap& map);

}  // namespace chaosrng

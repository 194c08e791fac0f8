#pragma once

#include <cstdio>
#include <string>

namespace chaosrng::detail {

// Round-trippable decimal rendering for CSV payloads.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace chaosrng::detail

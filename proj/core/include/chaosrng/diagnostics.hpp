#pragma once

#include <functional>
#include <string_view>

namespace chaosrng::diag {

// Non-fatal events (dropped slivers, breakpoint nudges, clipped branches, ...)
// are routed through a process-wide sink. The default sink discards them.
using Sink = std::function<void(std::string_view)>;

void set_sink(Sink sink);
void warn(std::string_view message);

// Convenience sink writing "chaosrng: <message>" lines to stderr.
Sink stderr_sink();

}  // namespace chaosrng::diag

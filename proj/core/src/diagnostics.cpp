#include "chaosrng/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace chaosrng::diag {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& current_sink() {
  static Sink sink;
  return sink;
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  current_sink() = std::move(sink);
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) current_sink()(message);
}

Sink stderr_sink() {
  return [](std::string_view message) { std::cerr << "chaosrng: " << message << '\n'; };
}

}  // namespace chaosrng::diag

#pragma once

#include <cstdint>
#include <random>

namespace chaosrng {

using Rng = std::mt19937_64;

// Uniform double on the open interval (0,1), 53-bit resolution. Defined
// bit-exactly (unlike std::uniform_real_distribution) so seeded runs match
// across standard libraries.
inline double uniform_open01(Rng& rng) {
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    if (u > 0.0) return u;
  }
}

// Independent stream for (seed, index) pairs, e.g. one per Monte Carlo trial.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

}  // namespace chaosrng

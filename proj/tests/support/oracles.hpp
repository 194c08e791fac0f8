#pragma once

// Independent reference computations used to check the library. None of
// these go through the symbolic (interval) pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "chaosrng/map.hpp"

namespace chaosrng::oracle {

// Time average (1/n) sum ln|M'(x_i)| along a trajectory with tiny additive
// state noise (exact floating-point iteration of dyadic maps collapses).
inline double birkhoff_lyapunov(const PiecewiseMap& map, double x0, std::size_t steps,
                                std::uint64_t seed, std::size_t burn_in = 1000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1e-10, 1e-10);
  double x = x0;
  double total = 0.0;
  for (std::size_t i = 0; i < steps + burn_in; ++i) {
    nudge_off_breakpoints(map, x);
    const auto& b = map.branches()[map.branch_index(x)];
    if (i >= burn_in) total += std::log(std::abs(b.derivative(x)));
    x = b.forward(x) + noise(rng);
    if (x <= 0.0) x = -x;
    if (x >= 1.0) x = 2.0 - x;
  }
  return total / static_cast<double>(steps);
}

// Kolmogorov-Smirnov distance of samples against the uniform CDF.
inline double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - xs[i]));
    d = std::max(d, std::abs(xs[i] - static_cast<double>(i) / n));
  }
  return d;
}

inline std::vector<std::uint8_t> fair_coin_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return bits;
}

inline std::vector<std::uint8_t> biased_bits(std::size_t n, double p_one, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p_one);
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = coin(rng) ? 1 : 0;
  return bits;
}

// Binary entropy in bits.
inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace chaosrng::oracle

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosrng/density.hpp"
#include "chaosrng/map.hpp"
#include "chaosrng/symbolic.hpp"

namespace chaosrng {

// H(Z^n) in bits, 0 log 0 = 0.
double block_entropy(const SequenceTable& table, std::size_t n);

// H(Z_n | Z^{n-1}) = H(Z^n) - H(Z^{n-1}); block_entropy(1) for n = 1.
// Negative round-off is clipped to 0.
double conditional_entropy(const SequenceTable& table, std::size_t n);

struct EntropyPoint {
  std::size_t n = 0;
  double block = 0.0;        // H(Z^n)
  double conditional = 0.0;  // H(Z_n | Z^{n-1})
};

struct EntropyReport {
  std::vector<EntropyPoint> per_n;
  // H(Z_{n_max} | Z^{n_max - 1}), bits per symbol.
  double entropy_rate = 0.0;
  // Least-squares fit |H_n - H| ~ C exp(-gamma n) over n < n_max; empty when
  // the conditional entropies are flat to round-off or n_max < 3.
  std::optional<double> convergence_exponent;
  double bias = 0.0;
  double lyapunov = 0.0;  // nats

  // lambda * log2(e): Pesin-type upper bound on the bit entropy rate.
  double pesin_bound() const noexcept;
};

inline constexpr std::size_t kDefaultEntropyDepth = 10;

// Builds the report from an existing table, n_max = table depth.
EntropyReport entropy_report(const SequenceTable& table, double lyapunov);

// refine + entropy_report: the full symbolic pipeline.
EntropyReport entropy_rate(const PiecewiseMap& map, const BitGen& gen,
                           const InvariantDensity& density,
                           std::size_t n_max = kDefaultEntropyDepth);

// Plug-in estimate H(Z^m) - H(Z^{m-1}) from overlapping m-gram counts.
// Requires bits.size() >= 100 * 2^block_len (InsufficientDataError).
double empirical_entropy(std::span<const std::uint8_t> bits, std::size_t block_len);

std::string entropy_report_to_csv(const EntropyReport& report);
// {entropy_rate, bias, lyapunov, convergence_exponent, per_n: [...]}
std::string entropy_report_to_json(const EntropyReport& report);

}  // namespace chaosrng

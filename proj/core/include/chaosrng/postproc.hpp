#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chaosrng/bitstream.hpp"
#include "chaosrng/density.hpp"
#include "chaosrng/map.hpp"
#include "chaosrng/symbolic.hpp"

namespace chaosrng {

struct GenerateOptions {
  // Half-width of the uniform state noise added after each map step. Exact
  // double arithmetic on maps with dyadic slopes (Bernoulli, tent, zigzag)
  // shifts one mantissa bit out per step and collapses onto 0 within ~55
  // iterations; the noise keeps refreshing the low-order bits.
  double state_noise = 1e-10;
};

// x_0 ~ f, then z_n = gen(x_{n-1}) along the (noisy) trajectory.
BitStream generate_bits(const PiecewiseMap& map, const BitGen& gen, const DensityGrid& f,
                        std::size_t count, std::uint64_t seed, const GenerateOptions& options = {});

struct PostprocessResult {
  BitStream output;
  double rate = 0.0;  // output bits per input bit
};

// Non-overlapping pairs: 01 -> 0, 10 -> 1, 00 and 11 dropped.
PostprocessResult von_neumann(const BitStream& input);

// (P[01] + P[10]) / 2 from the length-2 word probabilities.
double vn_rate_exact(const SequenceTable& table);

// Typical-set relabeling coder. Words z^n with
//   2^{-n(H+eps)} <= P[z^n] <= 2^{-n(H-eps)}
// receive distinct k-bit labels, k = ceil(log2 |A|), in order of decreasing
// probability; every other word maps to the all-zero label.
class TypicalSetCoder {
 public:
  static constexpr std::int64_t kAtypical = -1;

  std::size_t block_length() const noexcept { return n_; }
  std::size_t label_bits() const noexcept { return k_; }
  double epsilon() const noexcept { return epsilon_; }
  double entropy_rate() const noexcept { return entropy_rate_; }
  std::size_t typical_size() const noexcept { return typical_size_; }
  // P[Z^n in A].
  double coverage() const noexcept { return coverage_; }
  double rate() const noexcept {
    return static_cast<double>(k_) / static_cast<double>(n_);
  }

  bool is_typical(std::uint64_t word) const { return labels_.at(word) != kAtypical; }
  std::uint64_t label(std::uint64_t word) const;

 private:
  friend TypicalSetCoder build_typical_coder(const SequenceTable&, std::size_t, double, double);
  TypicalSetCoder() = default;

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  double epsilon_ = 0.0;
  double entropy_rate_ = 0.0;
  std::size_t typical_size_ = 0;
  double coverage_ = 0.0;
  std::vector<std::int64_t> labels_;
};

// Entropy rate defaults to H(Z_d | Z^{d-1}) at the table depth d. Throws
// ConfigError when the typical set is empty.
TypicalSetCoder build_typical_coder(const SequenceTable& table, std::size_t n, double epsilon,
                                    double entropy_rate);
TypicalSetCoder build_typical_coder(const SequenceTable& table, std::size_t n, double epsilon);

// Block-wise relabeling; a trailing partial block is dropped.
BitStream encode(const TypicalSetCoder& coder, const BitStream& input);

// H(T^k) in bits: the length-n word distribution pushed through the codebook.
double exact_output_entropy(const TypicalSetCoder& coder, const SequenceTable& table);

// Post-processors whose output rate is 1 (one output bit per input bit).
inline constexpr double kRateOnePostprocessor = 1.0;

inline constexpr double kRateBoundSlack = 0.02;

struct RateVerdict {
  bool pass = false;
  double entropy_rate = 0.0;
  double rate = 0.0;
  // entropy_rate - rate; negative when the rate exceeds the entropy rate.
  double margin = 0.0;
};

// A post-processor can only be asymptotically truly random if its rate does
// not exceed the source entropy rate. PASS iff rate <= H + kRateBoundSlack.
RateVerdict check_rate_bound(double entropy_rate, double rate);
RateVerdict check_rate_bound(const SequenceTable& table, double rate);

}  // namespace chaosrng

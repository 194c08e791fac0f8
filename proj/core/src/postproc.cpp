#include "chaosrng/postproc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "chaosrng/entropy.hpp"
#include "chaosrng/error.hpp"
#include "format.hpp"

namespace chaosrng {

BitStream generate_bits(const PiecewiseMap& map, const BitGen& gen, const DensityGrid& f,
                        std::size_t count, std::uint64_t seed, const GenerateOptions& options) {
  BitStream out;
  out.origin = {map.label(), seed, count};
  if (count == 0) return out;
  f.require_normalized("generate_bits");
  Rng rng(seed);
  double x = sample(f, rng);
  nudge_off_breakpoints(map, x);
  out.bits.resize(count);
  const double a = options.state_noise;
  for (std::size_t i = 0; i < count; ++i) {
    out.bits[i] = static_cast<std::uint8_t>(gen.bit(x));
    x = map.branches()[map.branch_index(x)].forward(x);
    if (a > 0.0) x += a * (2.0 * uniform_open01(rng) - 1.0);
    // Reflect back into (0,1).
    if (x <= 0.0) x = -x;
    if (x >= 1.0) x = 2.0 - x;
    nudge_off_breakpoints(map, x);
  }
  return out;
}

PostprocessResult von_neumann(const BitStream& input) {
  PostprocessResult r;
  r.output.origin = input.origin;
  const auto& in = input.bits;
  r.output.bits.reserve(in.size() / 4 + 1);
  for (std::size_t i = 0; i + 1 < in.size(); i += 2) {
    if (in[i] != in[i + 1]) r.output.bits.push_back(in[i]);
  }
  r.output.origin.length = r.output.bits.size();
  r.rate = in.empty() ? 0.0
                      : static_cast<double>(r.output.bits.size()) / static_cast<double>(in.size());
  return r;
}

double vn_rate_exact(const SequenceTable& table) {
  if (table.depth() < 2) throw ConfigError("vn_rate_exact: table depth must be at least 2");
  return 0.5 * (table.probability(0b01, 2) + table.probability(0b10, 2));
}

std::uint64_t TypicalSetCoder::label(std::uint64_t word) const {
  const auto l = labels_.at(word);
  return l == kAtypical ? 0 : static_cast<std::uint64_t>(l);
}

TypicalSetCoder build_typical_coder(const SequenceTable& table, std::size_t n, double epsilon,
                                    double entropy_rate) {
  if (n == 0 || n > table.depth()) {
    throw ConfigError("typical-set coder: block length " + std::to_string(n) +
                      " must lie in [1, table depth " + std::to_string(table.depth()) + "]");
  }
  if (!(epsilon > 0.0)) throw ConfigError("typical-set coder: epsilon must be positive");

  const auto probs = table.level(n);
  const double nn = static_cast<double>(n);
  const double lo = std::exp2(-nn * (entropy_rate + epsilon));
  const double hi = std::exp2(-nn * (entropy_rate - epsilon));

  std::vector<std::uint64_t> typical;
  double coverage = 0.0;
  for (std::uint64_t w = 0; w < probs.size(); ++w) {
    if (probs[w] > 0.0 && probs[w] >= lo && probs[w] <= hi) {
      typical.push_back(w);
      coverage += probs[w];
    }
  }
  if (typical.empty()) {
    throw ConfigError("typical-set coder: typical set is empty at n=" + std::to_string(n) +
                      ", epsilon=" + detail::fmt_double(epsilon) + "; try a larger epsilon");
  }
  // Descending probability, ties broken by word value for determinism.
  std::stable_sort(typical.begin(), typical.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return probs[a] > probs[b]; });

  TypicalSetCoder c;
  c.n_ = n;
  c.epsilon_ = epsilon;
  c.entropy_rate_ = entropy_rate;
  c.typical_size_ = typical.size();
  c.coverage_ = coverage;
  c.k_ = typical.size() <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(typical.size() - 1));
  c.labels_.assign(probs.size(), TypicalSetCoder::kAtypical);
  for (std::size_t i = 0; i < typical.size(); ++i) {
    c.labels_[typical[i]] = static_cast<std::int64_t>(i);
  }
  return c;
}

TypicalSetCoder build_typical_coder(const SequenceTable& table, std::size_t n, double epsilon) {
  return build_typical_coder(table, n, epsilon, conditional_entropy(table, table.depth()));
}

BitStream encode(const TypicalSetCoder& coder, const BitStream& input) {
  BitStream out;
  out.origin = input.origin;
  const std::size_t n = coder.block_length();
  const std::size_t k = coder.label_bits();
  const std::size_t blocks = input.size() / n;
  out.bits.reserve(blocks * k);
  for (std::size_t b = 0; b < blocks; ++b) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) word = (word << 1) | input.bits[b * n + i];
    const auto label = coder.label(word);
    for (std::size_t i = 0; i < k; ++i) {
      out.bits.push_back(static_cast<std::uint8_t>((label >> (k - 1 - i)) & 1u));
    }
  }
  out.origin.length = out.bits.size();
  return out;
}

double exact_output_entropy(const TypicalSetCoder& coder, const SequenceTable& table) {
  const auto probs = table.level(coder.block_length());
  std::vector<double> label_probs(std::size_t{1} << coder.label_bits(), 0.0);
  for (std::uint64_t w = 0; w < probs.size(); ++w) label_probs[coder.label(w)] += probs[w];
  double h = 0.0;
  for (double p : label_probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

RateVerdict check_rate_bound(double entropy_rate, double rate) {
  RateVerdict v;
  v.entropy_rate = entropy_rate;
  v.rate = rate;
  v.margin = entropy_rate - rate;
  v.pass = rate <= entropy_rate + kRateBoundSlack;
  return v;
}

RateVerdict check_rate_bound(const SequenceTable& table, double rate) {
  return check_rate_bound(conditional_entropy(table, table.depth()), rate);
}

}  // namespace chaosrng

#include "chaosrng/entropy.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "chaosrng/diagnostics.hpp"
#include "chaosrng/error.hpp"
#include "chaosrng/lyapunov.hpp"
#include "format.hpp"

namespace chaosrng {
namespace {

double shannon_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double counts_entropy(std::span<const std::uint64_t> counts, std::uint64_t total) {
  double h = 0.0;
  const double inv = 1.0 / static_cast<double>(total);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) * inv;
    h -= p * std::log2(p);
  }
  return h;
}

// Entropy of overlapping m-grams over the first `windows` start positions.
double gram_entropy(std::span<const std::uint8_t> bits, std::size_t m, std::size_t windows) {
  if (m == 0) return 0.0;
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < m - 1; ++i) w = (w << 1) | bits[i];
  for (std::size_t s = 0; s < windows; ++s) {
    w = ((w << 1) | bits[s + m - 1]) & mask;
    ++counts[w];
  }
  return counts_entropy(counts, windows);
}

}  // namespace

double block_entropy(const SequenceTable& table, std::size_t n) {
  return shannon_bits(table.level(n));
}

double conditional_entropy(const SequenceTable& table, std::size_t n) {
  if (n == 1) return block_entropy(table, 1);
  double h = block_entropy(table, n) - block_entropy(table, n - 1);
  if (h < 0.0) {
    if (h < -1e-9) {
      diag::warn("conditional entropy at n=" + std::to_string(n) + " is negative (" +
                 detail::fmt_double(h) + "); clipped to 0");
    }
    h = 0.0;
  }
  return h;
}

double EntropyReport::pesin_bound() const noexcept { return lyapunov * std::numbers::log2e; }

EntropyReport entropy_report(const SequenceTable& table, double lyapunov) {
  const std::size_t n_max = table.depth();
  if (n_max < 1) throw ConfigError("entropy_rate: n_max must be at least 1");
  EntropyReport r;
  for (std::size_t n = 1; n <= n_max; ++n) {
    r.per_n.push_back({n, block_entropy(table, n), conditional_entropy(table, n)});
  }
  r.entropy_rate = r.per_n.back().conditional;
  r.bias = bias(table);
  r.lyapunov = lyapunov;

  // Fit ln|H_n - H| = a - gamma n.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t n = 1; n < n_max; ++n) {
    const double d = r.per_n[n - 1].conditional - r.entropy_rate;
    if (d > 1e-12) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(d));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    r.convergence_exponent = -sxy / sxx;
  }
  return r;
}

EntropyReport entropy_rate(const PiecewiseMap& map, const BitGen& gen,
                           const InvariantDensity& density, std::size_t n_max) {
  if (n_max < 1) throw ConfigError("entropy_rate: n_max must be at least 1");
  const auto table = refine(map, gen, n_max, StateMeasure::from_invariant(density));
  return entropy_report(table, lyapunov(map, density.density));
}

double empirical_entropy(std::span<const std::uint8_t> bits, std::size_t block_len) {
  if (block_len == 0 || block_len > 30) {
    throw ConfigError("empirical_entropy: block length must lie in [1,30]");
  }
  const std::size_t required = std::size_t{100} << block_len;
  if (bits.size() < required) {
    throw InsufficientDataError("empirical_entropy: block length " + std::to_string(block_len) +
                                    " needs at least " + std::to_string(required) + " bits, got " +
                                    std::to_string(bits.size()),
                                required);
  }
  // Same window positions for both gram lengths.
  const std::size_t windows = bits.size() - block_len + 1;
  const double h_m = gram_entropy(bits, block_len, windows);
  const double h_prev = gram_entropy(bits, block_len - 1, windows);
  return std::max(0.0, h_m - h_prev);
}

std::string entropy_report_to_csv(const EntropyReport& report) {
  std::string out = "n,block_entropy,conditional_entropy\n";
  for (const auto& p : report.per_n) {
    out += std::to_string(p.n) + ',' + detail::fmt_double(p.block) + ',' +
           detail::fmt_double(p.conditional) + '\n';
  }
  return out;
}

std::string entropy_report_to_json(const EntropyReport& report) {
  nlohmann::ordered_json doc;
  doc["entropy_rate"] = report.entropy_rate;
  doc["bias"] = report.bias;
  doc["lyapunov"] = report.lyapunov;
  if (report.convergence_exponent) {
    doc["convergence_exponent"] = *report.convergence_exponent;
  } else {
    doc["convergence_exponent"] = nullptr;
  }
  doc["pesin_bound"] = report.pesin_bound();
  auto per_n = nlohmann::ordered_json::array();
  for (const auto& p : report.per_n) {
    per_n.push_back({{"n", p.n}, {"block_entropy", p.block}, {"conditional_entropy", p.conditional}});
  }
  doc["per_n"] = std::move(per_n);
  return doc.dump(2) + "\n";
}

}  // namespace chaosrng

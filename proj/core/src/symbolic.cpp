#include "chaosrng/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "chaosrng/error.hpp"
#include "format.hpp"

namespace chaosrng {

StateMeasure StateMeasure::from_invariant(const InvariantDensity& inv) {
  return inv.certified_uniform ? lebesgue() : from_density(inv.density);
}

double StateMeasure::measure(const IntervalSet& s) const {
  if (density_) return integrate(*density_, s);
  return std::clamp(s.total_length(), 0.0, 1.0);
}

std::string word_to_string(Word word, std::size_t length) {
  std::string out(length, '0');
  for (std::size_t i = 0; i < length; ++i) {
    if ((word >> (length - 1 - i)) & 1u) out[i] = '1';
  }
  return out;
}

// ---------------------------------------------------------------------------
// SequenceTable

SequenceTable::SequenceTable(std::vector<std::vector<double>> levels)
    : SequenceTable(std::move(levels), {}, {}) {}

SequenceTable::SequenceTable(std::vector<std::vector<double>> levels,
                             std::vector<std::vector<std::uint32_t>> interval_counts,
                             std::vector<std::vector<IntervalSet>> sets)
    : levels_(std::move(levels)), counts_(std::move(interval_counts)), sets_(std::move(sets)) {
  if (levels_.empty()) throw ConfigError("sequence table: depth must be at least 1");
  if (levels_.size() > kMaxDepth) throw ResourceError("sequence table: depth exceeds cap");
  for (std::size_t m = 1; m <= levels_.size(); ++m) {
    if (levels_[m - 1].size() != (std::size_t{1} << m)) {
      throw ConfigError("sequence table: level " + std::to_string(m) + " must hold 2^" +
                        std::to_string(m) + " entries");
    }
  }
  counts_.resize(levels_.size());
  sets_.resize(levels_.size());
}

SequenceTable SequenceTable::iid(double p_one, std::size_t depth) {
  if (!(p_one >= 0.0 && p_one <= 1.0)) throw ConfigError("iid table: p_one must lie in [0,1]");
  if (depth == 0 || depth > kMaxDepth) throw ResourceError("iid table: depth out of range");
  std::vector<std::vector<double>> levels(depth);
  for (std::size_t m = 1; m <= depth; ++m) {
    auto& lv = levels[m - 1];
    lv.resize(std::size_t{1} << m);
    for (Word w = 0; w < lv.size(); ++w) {
      const auto ones = static_cast<int>(std::popcount(w));
      lv[w] = std::pow(p_one, ones) * std::pow(1.0 - p_one, static_cast<int>(m) - ones);
    }
  }
  return SequenceTable(std::move(levels));
}

std::span<const double> SequenceTable::level(std::size_t length) const {
  if (length == 0 || length > levels_.size()) {
    throw ConfigError("sequence table: length " + std::to_string(length) +
                      " outside table depth " + std::to_string(levels_.size()));
  }
  return levels_[length - 1];
}

std::uint32_t SequenceTable::interval_count(Word word, std::size_t length) const {
  level(length);
  const auto& c = counts_[length - 1];
  return c.empty() ? 0 : c[word];
}

bool SequenceTable::has_sets(std::size_t length) const {
  level(length);
  return !sets_[length - 1].empty();
}

const IntervalSet& SequenceTable::set(Word word, std::size_t length) const {
  if (!has_sets(length)) {
    throw ConfigError("sequence table: interval sets for length " + std::to_string(length) +
                      " were not retained");
  }
  return sets_[length - 1][word];
}

// ---------------------------------------------------------------------------
// Recursion

std::pair<IntervalSet, IntervalSet> s1(const BitGen& gen) { return {gen.cell(0), gen.cell(1)}; }

IntervalSet preimage_set(const PiecewiseMap& map, const IntervalSet& s) {
  std::vector<Interval> out;
  for (const auto& b : map.branches()) {
    const auto& img = b.image();
    for (const auto& iv : s.intervals()) {
      const double lo = std::max(iv.lo, img.lo);
      const double hi = std::min(iv.hi, img.hi);
      if (!(hi > lo)) continue;
      double u0 = b.inverse(lo);
      double u1 = b.inverse(hi);
      if (u0 > u1) std::swap(u0, u1);
      out.push_back({std::max(u0, b.domain().lo), std::min(u1, b.domain().hi)});
    }
  }
  return IntervalSet(std::move(out));
}

SequenceTable refine(const PiecewiseMap& map, const BitGen& gen, std::size_t n,
                     const StateMeasure& measure, const RefineOptions& options) {
  if (n == 0) throw ConfigError("refine: depth must be at least 1");
  const std::size_t cap = std::min(options.max_depth, SequenceTable::kMaxDepth);
  if (n > cap) {
    throw ResourceError("refine: depth " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap) + " (memory grows as 2^n)");
  }

  const auto [cell0, cell1] = s1(gen);
  const IntervalSet* cells[2] = {&cell0, &cell1};

  std::vector<std::vector<double>> probs(n);
  std::vector<std::vector<std::uint32_t>> counts(n);
  std::vector<std::vector<IntervalSet>> kept(n);

  std::vector<IntervalSet> current{cell0, cell1};
  for (std::size_t m = 1; m <= n; ++m) {
    if (m > 1) {
      // For word z_1 w of length m, w is the length-(m-1) suffix.
      const std::size_t half = current.size();
      std::vector<IntervalSet> next(2 * half);
      for (Word w = 0; w < half; ++w) {
        const IntervalSet pre = preimage_set(map, current[w]);
        for (Word z = 0; z < 2; ++z) next[(z << (m - 1)) | w] = cells[z]->intersect(pre);
      }
      if (options.keep_all_sets) kept[m - 2] = std::move(current);
      current = std::move(next);
    }
    auto& p = probs[m - 1];
    auto& c = counts[m - 1];
    p.resize(current.size());
    c.resize(current.size());
    for (std::size_t w = 0; w < current.size(); ++w) {
      p[w] = measure.measure(current[w]);
      c[w] = static_cast<std::uint32_t>(current[w].size());
    }
  }
  kept[n - 1] = std::move(current);
  return SequenceTable(std::move(probs), std::move(counts), std::move(kept));
}

double bias(const SequenceTable& table) { return std::abs(table.probability(0, 1) - 0.5); }

std::string sequence_table_to_csv(const SequenceTable& table) {
  std::string out = "word,interval_count,probability\n";
  for (std::size_t m = 1; m <= table.depth(); ++m) {
    const auto lv = table.level(m);
    for (Word w = 0; w < lv.size(); ++w) {
      out += word_to_string(w, m);
      out += ',';
      out += std::to_string(table.interval_count(w, m));
      out += ',';
      out += detail::fmt_double(lv[w]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace chaosrng

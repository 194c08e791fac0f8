#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaosrng/density.hpp"
#include "chaosrng/interval_set.hpp"
#include "chaosrng/map.hpp"

namespace chaosrng {

// Distribution of the initial state x_0: either Lebesgue measure (exact
// interval lengths, valid for maps with a uniform invariant density) or a
// piecewise-constant density.
class StateMeasure {
 public:
  static StateMeasure lebesgue() { return StateMeasure(std::nullopt); }
  static StateMeasure from_density(DensityGrid f) { return StateMeasure(std::move(f)); }
  // Lebesgue when certified uniform, otherwise the computed grid.
  static StateMeasure from_invariant(const InvariantDensity& inv);

  bool is_lebesgue() const noexcept { return !density_.has_value(); }
  const DensityGrid* density() const noexcept { return density_ ? &*density_ : nullptr; }
  double measure(const IntervalSet& s) const;

 private:
  explicit StateMeasure(std::optional<DensityGrid> f) : density_(std::move(f)) {}
  std::optional<DensityGrid> density_;
};

// Words are bit strings z_1..z_m packed with z_1 as the most significant bit.
using Word = std::uint64_t;
std::string word_to_string(Word word, std::size_t length);

// Exact probabilities P[z^m] for all words of length 1..depth, plus the
// interval sets S_m(z^m) where they were retained.
class SequenceTable {
 public:
  static constexpr std::size_t kMaxDepth = 20;

  // levels[m-1] holds 2^m probabilities. Interval data is left empty.
  explicit SequenceTable(std::vector<std::vector<double>> levels);
  SequenceTable(std::vector<std::vector<double>> levels,
                std::vector<std::vector<std::uint32_t>> interval_counts,
                std::vector<std::vector<IntervalSet>> sets);

  // Table of an iid source with P[1] = p_one.
  static SequenceTable iid(double p_one, std::size_t depth);

  std::size_t depth() const noexcept { return levels_.size(); }
  std::span<const double> level(std::size_t length) const;
  double probability(Word word, std::size_t length) const { return level(length)[word]; }
  // Interval count of S_m(word); 0 when the table carries no interval data.
  std::uint32_t interval_count(Word word, std::size_t length) const;
  bool has_sets(std::size_t length) const;
  const IntervalSet& set(Word word, std::size_t length) const;

 private:
  std::vector<std::vector<double>> levels_;
  std::vector<std::vector<std::uint32_t>> counts_;
  std::vector<std::vector<IntervalSet>> sets_;
};

// (S_1(0), S_1(1)).
std::pair<IntervalSet, IntervalSet> s1(const BitGen& gen);

// M^{-1}(s): union over branches of the branch inverse of s.
IntervalSet preimage_set(const PiecewiseMap& map, const IntervalSet& s);

struct RefineOptions {
  std::size_t max_depth = SequenceTable::kMaxDepth;
  // Keep S_m for every m; otherwise only the deepest level is retained.
  bool keep_all_sets = false;
};

// S_n(z^n) = S_1(z_1) ∩ M^{-1}(S_{n-1}(z_2..z_n)) for all words up to length
// n, with P[z^m] = measure(S_m(z^m)).
SequenceTable refine(const PiecewiseMap& map, const BitGen& gen, std::size_t n,
                     const StateMeasure& measure, const RefineOptions& options = {});

double bias(const SequenceTable& table);

// CSV with header word,interval_count,probability, all lengths 1..depth.
std::string sequence_table_to_csv(const SequenceTable& table);

}  // namespace chaosrng

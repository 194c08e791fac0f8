#include "chaosrng/symbolic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "chaosrng/error.hpp"
#include "chaosrng/map.hpp"

using namespace chaosrng;

namespace {

SequenceTable table_for(const std::string& name, std::size_t n,
                        const RefineOptions& opts = {}) {
  const auto m = builtin(name);
  const auto inv = invariant_density(m);
  return refine(m, builtin_bitgen(name), n, StateMeasure::from_invariant(inv), opts);
}

}  // namespace

TEST(S1, ExampleMapThreshold) {
  const auto [s0, s1v] = s1(BitGen::threshold(1.0 / 3.0));
  EXPECT_EQ(s0, (IntervalSet{{0.0, 1.0 / 3.0}}));
  EXPECT_EQ(s1v, (IntervalSet{{1.0 / 3.0, 1.0}}));
}

TEST(S1, HalfThresholdIsSymmetric) {
  const auto [s0, s1v] = s1(BitGen::threshold(0.5));
  EXPECT_EQ(s0, (IntervalSet{{0.0, 0.5}}));
  EXPECT_EQ(s1v, (IntervalSet{{0.5, 1.0}}));
  EXPECT_DOUBLE_EQ(s0.total_length(), s1v.total_length());
}

TEST(PreimageSet, HandInversions) {
  EXPECT_EQ(preimage_set(builtin("bernoulli"), IntervalSet{{0.0, 0.5}}),
            (IntervalSet{{0.0, 0.25}, {0.5, 0.75}}));
  EXPECT_EQ(preimage_set(builtin("tent"), IntervalSet{{0.0, 0.5}}),
            (IntervalSet{{0.0, 0.25}, {0.75, 1.0}}));
}

TEST(PreimageSet, FullPreimageOmitsOnlyBreakpoints) {
  for (const auto& name : builtin_names()) {
    const auto m = builtin(name);
    const auto p = preimage_set(m, IntervalSet::unit());
    EXPECT_NEAR(p.total_length(), 1.0, 1e-12) << name;
    EXPECT_EQ(p.size(), m.branches().size()) << name;
    for (double bp : m.breakpoints()) EXPECT_FALSE(p.contains(bp));
  }
}

TEST(Refine, BernoulliDepthTwo) {
  const auto t = refine(builtin("bernoulli"), BitGen::threshold(0.5), 2, StateMeasure::lebesgue());
  const double q[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (Word w = 0; w < 4; ++w) {
    EXPECT_EQ(t.set(w, 2), (IntervalSet{{q[w], q[w + 1]}})) << w;
    EXPECT_DOUBLE_EQ(t.probability(w, 2), 0.25);
  }
}

TEST(Refine, DepthOneMatchesS1AndIntegrate) {
  for (const auto& name : builtin_names()) {
    const auto m = builtin(name);
    const auto gen = builtin_bitgen(name);
    const auto inv = invariant_density(m);
    const auto t = refine(m, gen, 1, StateMeasure::from_invariant(inv));
    const auto [s0, s1v] = s1(gen);
    EXPECT_NEAR(t.probability(0, 1), integrate(inv.density, s0), 1e-12) << name;
    EXPECT_NEAR(t.probability(1, 1), integrate(inv.density, s1v), 1e-12) << name;
  }
}

TEST(Refine, ExampleMapSymbolProbabilities) {
  const auto t = table_for("example", 1);
  EXPECT_NEAR(t.probability(0, 1), 0.14, 0.01);
  EXPECT_NEAR(t.probability(1, 1), 0.86, 0.01);
}

TEST(Refine, DepthCap) {
  EXPECT_THROW(refine(builtin("bernoulli"), BitGen::threshold(0.5), 21, StateMeasure::lebesgue()),
               ResourceError);
  EXPECT_THROW(refine(builtin("bernoulli"), BitGen::threshold(0.5), 8, StateMeasure::lebesgue(),
                      {.max_depth = 6}),
               ResourceError);
  EXPECT_THROW(refine(builtin("bernoulli"), BitGen::threshold(0.5), 0, StateMeasure::lebesgue()),
               ConfigError);
}

TEST(Refine, KeepsRequestedSets) {
  const auto deep = table_for("tent", 5, {.keep_all_sets = true});
  for (std::size_t m = 1; m <= 5; ++m) EXPECT_TRUE(deep.has_sets(m));
  const auto shallow = table_for("tent", 5);
  EXPECT_TRUE(shallow.has_sets(5));
  EXPECT_FALSE(shallow.has_sets(3));
}

TEST(Bias, KnownMaps) {
  EXPECT_NEAR(bias(table_for("example", 1)), 0.36, 0.01);
  EXPECT_NEAR(bias(table_for("bernoulli", 1)), 0.0, 1e-12);
  EXPECT_NEAR(bias(table_for("dec-bernoulli", 1)), 0.0, 0.01);
}

TEST(SequenceTable, IidSource) {
  const auto t = SequenceTable::iid(0.25, 3);
  EXPECT_DOUBLE_EQ(t.probability(0b000, 3), 0.75 * 0.75 * 0.75);
  EXPECT_DOUBLE_EQ(t.probability(0b101, 3), 0.25 * 0.75 * 0.25);
  EXPECT_EQ(t.interval_count(0, 3), 0u);
  EXPECT_THROW(SequenceTable({{0.5, 0.5}, {0.25, 0.75}}), ConfigError);
}

TEST(SequenceTable, Csv) {
  const auto csv = sequence_table_to_csv(table_for("bernoulli", 2));
  EXPECT_EQ(csv.rfind("word,interval_count,probability\n", 0), 0u);
  EXPECT_NE(csv.find("\n01,1,0.25\n"), std::string::npos);
  EXPECT_EQ(word_to_string(0b0110, 4), "0110");
}

class SymbolicProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(SymbolicProperties, PartitionAndNormalization) {
  const auto m = builtin(GetParam());
  const auto t = table_for(GetParam(), 12, {.keep_all_sets = true});
  for (std::size_t n = 1; n <= 12; ++n) {
    double length = 0.0;
    double prob = 0.0;
    std::vector<Interval> all;
    for (Word w = 0; w < (Word{1} << n); ++w) {
      const auto& s = t.set(w, n);
      length += s.total_length();
      prob += t.probability(w, n);
      all.insert(all.end(), s.intervals().begin(), s.intervals().end());
      const double cap = std::pow(static_cast<double>(m.branches().size()), n);
      EXPECT_LE(static_cast<double>(s.size()), cap);
    }
    EXPECT_NEAR(length, 1.0, 1e-9) << "n=" << n;
    EXPECT_NEAR(prob, 1.0, 1e-6) << "n=" << n;
    // Pairwise disjoint: sorted endpoints never overlap.
    std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < all.size(); ++i) {
      ASSERT_LE(all[i - 1].hi, all[i].lo + 1e-15) << "n=" << n;
    }
  }
}

TEST_P(SymbolicProperties, MarginalsConsistent) {
  const auto t = table_for(GetParam(), 8);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (Word w = 0; w < (Word{1} << (n - 1)); ++w) {
      const double prefix = t.probability(w << 1, n) + t.probability((w << 1) | 1, n);
      EXPECT_NEAR(prefix, t.probability(w, n - 1), 1e-9);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, SymbolicProperties,
                         ::testing::Values("bernoulli", "tent", "example", "dec-bernoulli",
                                           "tailed-tent", "zigzag"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::erase(s, '-');
                           return s;
                         });

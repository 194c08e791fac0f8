#include "chaosrng/postproc.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "chaosrng/entropy.hpp"
#include "chaosrng/error.hpp"
#include "chaosrng/map.hpp"
#include "oracles.hpp"

using namespace chaosrng;

namespace {

struct Source {
  PiecewiseMap map;
  BitGen gen;
  InvariantDensity inv;
  SequenceTable table;
};

Source source(const std::string& name, std::size_t depth = 10) {
  auto m = builtin(name);
  auto gen = builtin_bitgen(name);
  auto inv = invariant_density(m);
  auto table = refine(m, gen, depth, StateMeasure::from_invariant(inv));
  return {std::move(m), std::move(gen), std::move(inv), std::move(table)};
}

BitStream stream(std::vector<std::uint8_t> bits) { return BitStream{std::move(bits), {}}; }

}  // namespace

TEST(Generate, FractionOfOnes) {
  for (const auto& [name, p1] : {std::pair{"bernoulli", 0.5}, std::pair{"example", 0.86}}) {
    auto s = source(name, 1);
    const auto bits = generate_bits(s.map, s.gen, s.inv.density, 1'000'000, 7);
    EXPECT_EQ(bits.size(), 1'000'000u);
    EXPECT_EQ(bits.origin.label, name);
    EXPECT_EQ(bits.origin.seed, 7u);
    EXPECT_NEAR(bits.fraction_of_ones(), p1, name == std::string("example") ? 0.01 : 0.002);
    EXPECT_NEAR(bits.fraction_of_ones(), s.table.probability(1, 1), 0.002);
  }
}

TEST(Generate, EmptyAndDeterministic) {
  auto s = source("zigzag", 1);
  EXPECT_EQ(generate_bits(s.map, s.gen, s.inv.density, 0, 1).size(), 0u);
  const auto a = generate_bits(s.map, s.gen, s.inv.density, 5000, 42);
  const auto b = generate_bits(s.map, s.gen, s.inv.density, 5000, 42);
  const auto c = generate_bits(s.map, s.gen, s.inv.density, 5000, 43);
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_NE(a.bits, c.bits);
}

TEST(VonNeumann, Definition) {
  const auto r = von_neumann(stream({0, 0, 0, 1, 1, 0, 1, 1}));
  EXPECT_EQ(r.output.bits, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_DOUBLE_EQ(r.rate, 0.25);
  EXPECT_EQ(von_neumann(stream({1})).output.size(), 0u);
}

TEST(VonNeumann, FairCoinRate) {
  const auto r = von_neumann(stream(oracle::fair_coin_bits(1'000'000, 5)));
  EXPECT_NEAR(r.rate, 0.25, 0.002);
}

TEST(VonNeumann, ExampleMapRate) {
  auto s = source("example", 2);
  const auto r = von_neumann(generate_bits(s.map, s.gen, s.inv.density, 1'000'000, 5));
  EXPECT_NEAR(r.rate, 0.11, 0.01);
}

TEST(VonNeumann, UnbiasedOnIidInput) {
  for (double p : {0.5, 0.86}) {
    const auto r = von_neumann(stream(oracle::biased_bits(1'000'000, p, 19)));
    EXPECT_NEAR(r.output.fraction_of_ones(), 0.5, 0.005) << p;
  }
}

TEST(VnRateExact, KnownSources) {
  auto ex = source("example", 2);
  EXPECT_NEAR(ex.table.probability(0b01, 2), 0.11, 0.01);
  EXPECT_NEAR(ex.table.probability(0b10, 2), 0.11, 0.01);
  EXPECT_NEAR(vn_rate_exact(ex.table), 0.11, 0.01);
  EXPECT_NEAR(vn_rate_exact(source("bernoulli", 2).table), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(vn_rate_exact(SequenceTable::iid(1.0, 2)), 0.0);
}

class PostprocProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(PostprocProperties, VnRateExactMatchesEmpirical) {
  auto s = source(GetParam(), 2);
  const auto r = von_neumann(generate_bits(s.map, s.gen, s.inv.density, 1'000'000, 31));
  EXPECT_NEAR(r.rate, vn_rate_exact(s.table), 0.005);
}

TEST_P(PostprocProperties, CoderOutputEntropyObeysDataProcessing) {
  auto s = source(GetParam());
  const double h = conditional_entropy(s.table, 10);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (double eps : {0.1, 0.25, 0.5}) {
      TypicalSetCoder coder = [&] {
        try {
          return build_typical_coder(s.table, n, eps);
        } catch (const ConfigError&) {
          return build_typical_coder(s.table, n, 1.0);
        }
      }();
      EXPECT_LE(exact_output_entropy(coder, s.table), block_entropy(s.table, n) + 1e-9);
      EXPECT_LE(exact_output_entropy(coder, s.table), coder.label_bits() + 1e-9);
    }
  }
  EXPECT_GE(h, 0.0);
}

TEST_P(PostprocProperties, CoderCoverageIsTypicalMass) {
  auto s = source(GetParam());
  const auto coder = build_typical_coder(s.table, 10, 0.1);
  double mass = 0.0;
  std::size_t count = 0;
  for (Word w = 0; w < 1024; ++w) {
    if (!coder.is_typical(w)) continue;
    mass += s.table.probability(w, 10);
    ++count;
  }
  EXPECT_EQ(count, coder.typical_size());
  EXPECT_NEAR(mass, coder.coverage(), 1e-12);
  EXPECT_EQ(coder.label_bits(), static_cast<std::size_t>(std::ceil(std::log2(count))));
}

INSTANTIATE_TEST_SUITE_P(All, PostprocProperties,
                         ::testing::Values("bernoulli", "tent", "example", "dec-bernoulli",
                                           "tailed-tent", "zigzag"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::erase(s, '-');
                           return s;
                         });

TEST(TypicalCoder, UniformSourceIsIdentityLike) {
  const auto t = source("bernoulli", 8).table;
  const auto coder = build_typical_coder(t, 8, 0.05);
  EXPECT_EQ(coder.typical_size(), 256u);
  EXPECT_EQ(coder.label_bits(), 8u);
  EXPECT_DOUBLE_EQ(coder.rate(), 1.0);
  EXPECT_NEAR(coder.coverage(), 1.0, 1e-12);
  EXPECT_NEAR(exact_output_entropy(coder, t), 8.0, 1e-9);
}

TEST(TypicalCoder, ExampleMapRateWithinTheoremWindow) {
  auto s = source("example");
  const auto coder = build_typical_coder(s.table, 10, 0.1);
  const double h = coder.entropy_rate();
  EXPECT_NEAR(h, 0.57, 0.02);
  EXPECT_GE(coder.rate(), h - 0.1 - 0.1);
  EXPECT_LE(coder.rate(), h + 0.1 + 0.1);
  // Labels are distinct and ordered by descending word probability.
  std::vector<std::pair<double, std::uint64_t>> typical;
  for (Word w = 0; w < 1024; ++w) {
    if (coder.is_typical(w)) typical.emplace_back(s.table.probability(w, 10), coder.label(w));
  }
  std::stable_sort(typical.begin(), typical.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < typical.size(); ++i) EXPECT_EQ(typical[i].second, i);
}

TEST(TypicalCoder, DegenerateSource) {
  const auto t = SequenceTable::iid(0.0, 4);
  const auto coder = build_typical_coder(t, 4, 0.1, 0.0);
  EXPECT_EQ(coder.typical_size(), 1u);
  EXPECT_EQ(coder.label_bits(), 0u);
  EXPECT_EQ(encode(coder, stream(std::vector<std::uint8_t>(40, 0))).size(), 0u);
}

TEST(TypicalCoder, EmptyTypicalSetIsConfigError) {
  // P[z^4] for p=0.3 never lands within 2^{-4(H +- 0.001)} of 2^{-4H}.
  const auto t = SequenceTable::iid(0.3, 4);
  EXPECT_THROW(build_typical_coder(t, 4, 0.001), ConfigError);
}

TEST(Encode, BernoulliStreamKeepsStatistics) {
  auto s = source("bernoulli", 8);
  const auto coder = build_typical_coder(s.table, 8, 0.05);
  const auto in = stream(oracle::fair_coin_bits(800'000, 12));
  const auto out = encode(coder, in);
  EXPECT_EQ(out.size(), in.size());
  EXPECT_NEAR(out.fraction_of_ones(), 0.5, 0.003);
  EXPECT_NEAR(empirical_entropy(out.view(), 8), 1.0, 0.01);
}

TEST(Encode, ShortStreamGivesEmptyOutput) {
  auto s = source("example");
  const auto coder = build_typical_coder(s.table, 10, 0.1);
  EXPECT_EQ(encode(coder, stream({1, 1, 0})).size(), 0u);
  EXPECT_EQ(encode(coder, stream(std::vector<std::uint8_t>(25, 1))).size(),
            2 * coder.label_bits());
}

TEST(Encode, ExampleMapOutputMatchesExactEntropy) {
  // At n = 10 the typical set covers only part of the mass, so the output is
  // far from uniform; the empirical per-label entropy must match the exact
  // H(T^k) the coder predicts.
  auto s = source("example");
  const auto coder = build_typical_coder(s.table, 10, 0.1);
  const auto bits = generate_bits(s.map, s.gen, s.inv.density, 1'000'000, 77);
  const auto out = encode(coder, bits);
  const std::size_t k = coder.label_bits();
  ASSERT_EQ(out.size(), (1'000'000 / 10) * k);
  std::vector<double> counts(std::size_t{1} << k, 0.0);
  for (std::size_t i = 0; i + k <= out.size(); i += k) {
    std::size_t label = 0;
    for (std::size_t j = 0; j < k; ++j) label = (label << 1) | out.bits[i + j];
    counts[label] += 1.0;
  }
  double h = 0.0;
  const double blocks = static_cast<double>(out.size() / k);
  for (double c : counts) {
    if (c > 0) h -= (c / blocks) * std::log2(c / blocks);
  }
  EXPECT_NEAR(h, exact_output_entropy(coder, s.table), 0.01);
  EXPECT_LT(exact_output_entropy(coder, s.table) / k, 0.95);
}

TEST(RateBound, Verdicts) {
  auto ex = source("example");
  const double h = conditional_entropy(ex.table, 10);
  const auto vn = check_rate_bound(ex.table, 0.11);
  EXPECT_TRUE(vn.pass);
  EXPECT_NEAR(vn.margin, h - 0.11, 1e-12);
  EXPECT_FALSE(check_rate_bound(ex.table, kRateOnePostprocessor).pass);
  const auto b = check_rate_bound(source("bernoulli").table, 1.0);
  EXPECT_TRUE(b.pass);
  EXPECT_NEAR(b.margin, 0.0, 1e-9);
  EXPECT_FALSE(check_rate_bound(0.5, 0.53).pass);
  EXPECT_TRUE(check_rate_bound(0.5, 0.52).pass);
}

#include "chaosrng/density.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "chaosrng/error.hpp"
#include "chaosrng/map.hpp"
#include "oracles.hpp"

using namespace chaosrng;

namespace {

DensityGrid coarsen(const DensityGrid& f) {
  std::vector<double> v(f.n_bins() / 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (f[2 * i] + f[2 * i + 1]);
  return DensityGrid(v);
}

DensityGrid one_bin(std::size_t n, std::size_t bin) {
  std::vector<double> v(n, 0.0);
  v[bin] = static_cast<double>(n);
  return DensityGrid(v);
}

}  // namespace

TEST(DensityGrid, ValidatesInput) {
  EXPECT_THROW(DensityGrid(std::vector<double>(100, 1.0)), ConfigError);
  EXPECT_THROW(DensityGrid(std::vector<double>{1.0, -1.0}), ConfigError);
  EXPECT_THROW(DensityGrid(std::vector<double>{1.0, NAN}), ConfigError);
  const DensityGrid f(std::vector<double>{2.0, 2.0});
  EXPECT_FALSE(f.is_normalized());
  EXPECT_THROW(f.require_normalized("test"), ConfigError);
  EXPECT_TRUE(f.normalized().is_normalized());
}

TEST(Ulam, BernoulliColumnSplitsAcrossImage) {
  const auto op = ulam_matrix(builtin("bernoulli"), {.n_bins = 64});
  // bin (0,1/64) maps onto (0,1/32): half into bin 0, half into bin 1.
  EXPECT_NEAR(op.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(op.at(1, 0), 0.5, 1e-12);
  EXPECT_EQ(op.column(0).size(), 2u);
}

TEST(Ulam, RejectsBadGrids) {
  EXPECT_THROW(ulam_matrix(builtin("bernoulli"), {.n_bins = 32}), ConfigError);
  EXPECT_THROW(ulam_matrix(builtin("bernoulli"), {.n_bins = 100}), ConfigError);
}

TEST(Ulam, ColumnsAreStochastic) {
  for (const auto& name : builtin_names()) {
    for (auto scheme : {UlamScheme::exact, UlamScheme::stratified}) {
      const auto op = ulam_matrix(builtin(name), {.n_bins = 1024, .scheme = scheme});
      for (std::size_t j = 0; j < op.n_bins(); ++j) {
        ASSERT_NEAR(op.column_sum(j), 1.0, 1e-9) << name << " column " << j;
      }
    }
  }
}

TEST(Ulam, TentFixesUniform) {
  for (std::size_t n : {64u, 512u, 4096u}) {
    const auto op = ulam_matrix(builtin("tent"), {.n_bins = n});
    const auto u = DensityGrid::uniform(n);
    EXPECT_LE(l1_distance(apply(op, u), u), 1e-9);
  }
}

TEST(Ulam, StratifiedAgreesWithExact) {
  // Per-bin sampling noise does not shrink with the grid, so compare the
  // densities coarse-grained to 64 bins.
  const auto m = builtin("example");
  auto a = steady_state(ulam_matrix(m, {.n_bins = 4096})).density;
  auto b =
      steady_state(ulam_matrix(m, {.n_bins = 4096, .scheme = UlamScheme::stratified})).density;
  while (a.n_bins() > 64) {
    a = coarsen(a);
    b = coarsen(b);
  }
  EXPECT_LE(l1_distance(a, b), 2e-3);
}

TEST(Apply, UniformUnderBernoulli) {
  const auto op = ulam_matrix(builtin("bernoulli"), {.n_bins = 256});
  const auto u = DensityGrid::uniform(256);
  EXPECT_LE(l1_distance(apply(op, u), u), 1e-12);
}

TEST(Apply, PointMassSplitsOverForwardImage) {
  const std::size_t n = 64;
  const auto op = ulam_matrix(builtin("bernoulli"), {.n_bins = n});
  // Bin 40 = (40/64, 41/64) maps onto (16/64, 18/64).
  const auto g = apply(op, one_bin(n, 40));
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = (i == 16 || i == 17) ? n / 2.0 : 0.0;
    EXPECT_NEAR(g[i], expected, 1e-9) << i;
  }
}

TEST(Apply, DimensionMismatch) {
  const auto op = ulam_matrix(builtin("bernoulli"), {.n_bins = 64});
  EXPECT_THROW(apply(op, DensityGrid::uniform(128)), ConfigError);
}

TEST(SteadyState, CertifiedMapsAreUniform) {
  for (const char* name : {"bernoulli", "tent", "zigzag", "tailed-tent"}) {
    const auto ss = steady_state(ulam_matrix(builtin(name)));
    EXPECT_LE(l1_distance(ss.density, DensityGrid::uniform(4096)), 1e-8) << name;
  }
}

TEST(SteadyState, TailedTentUniformForAnyTail) {
  for (double t : {0.06, 0.2, 0.5, 0.75, 0.89}) {
    const auto ss = steady_state(ulam_matrix(builtin("tailed-tent", {{"tail", t}})));
    EXPECT_LE(l1_distance(ss.density, DensityGrid::uniform(4096)), 1e-8) << t;
  }
}

TEST(SteadyState, ExampleMapMassBelowThreshold) {
  const auto ss = steady_state(ulam_matrix(builtin("example")));
  const double p0 = integrate(ss.density, IntervalSet{{0.0, 1.0 / 3.0}});
  EXPECT_NEAR(p0, 0.14, 0.01);
  EXPECT_GT(l1_distance(ss.density, DensityGrid::uniform(4096)), 0.1);
  EXPECT_LE(ss.residual, 1e-10);
}

TEST(SteadyState, NonConvergenceReportsResidual) {
  try {
    steady_state(ulam_matrix(builtin("example")), {.tol = 1e-300, .max_iters = 3});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_GT(e.last_residual(), 0.0);
  }
}

TEST(SteadyState, CyclicOperatorFallsBackToLazyIteration) {
  // Bins 0..15 collapse into bin 32; bins 16..63 spread over bins 0..15.
  // From uniform the mass of (0,1/4) alternates between 1/4 and 3/4.
  const std::size_t n = 64;
  std::vector<std::vector<TransferOperator::Entry>> cols(n);
  for (std::size_t j = 0; j < 16; ++j) cols[j] = {{32, 1.0}};
  for (std::size_t j = 16; j < n; ++j) {
    for (std::uint32_t i = 0; i < 16; ++i) cols[j].push_back({i, 1.0 / 16});
  }
  const TransferOperator op(n, cols);
  EXPECT_THROW(steady_state(op, {.max_iters = 5000, .lazy_after = 100000}), NumericError);
  const auto ss = steady_state(op, {.max_iters = 5000, .lazy_after = 50});
  EXPECT_LE(ss.residual, 1e-10);
  EXPECT_NEAR(integrate(ss.density, IntervalSet{{0.0, 0.25}}), 0.5, 1e-9);
  EXPECT_NEAR(ss.density[32], 32.0, 1e-6);
}

class DensityProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(DensityProperties, FixedPointResidual) {
  const auto op = ulam_matrix(builtin(GetParam()));
  const auto ss = steady_state(op);
  EXPECT_LE(l1_distance(apply(op, ss.density), ss.density), 1e-8);
}

TEST_P(DensityProperties, GridRefinementStability) {
  const auto m = builtin(GetParam());
  const auto fine = steady_state(ulam_matrix(m, {.n_bins = 4096})).density;
  const auto coarse = steady_state(ulam_matrix(m, {.n_bins = 2048})).density;
  EXPECT_LE(l1_distance(coarsen(fine), coarse), 5e-3);
}

INSTANTIATE_TEST_SUITE_P(All, DensityProperties,
                         ::testing::Values("bernoulli", "tent", "example", "dec-bernoulli",
                                           "tailed-tent", "zigzag"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::erase(s, '-');
                           return s;
                         });

TEST(InvariantDensity, CertifiedSkipsSolve) {
  const auto inv = invariant_density(builtin("zigzag"));
  EXPECT_TRUE(inv.certified_uniform);
  EXPECT_EQ(inv.iterations, 0u);
  const auto ex = invariant_density(builtin("example"));
  EXPECT_FALSE(ex.certified_uniform);
  EXPECT_GT(ex.iterations, 0u);
}

TEST(Integrate, Basics) {
  const auto u = DensityGrid::uniform(4096);
  EXPECT_DOUBLE_EQ(integrate(u, IntervalSet{{0.0, 0.25}}), 0.25);
  EXPECT_NEAR(integrate(u, IntervalSet{{0.1, 0.1 + 1e-5}}), 1e-5, 1e-15);
  const auto f = invariant_density(builtin("example")).density;
  EXPECT_NEAR(integrate(f, IntervalSet::unit()), 1.0, 1e-12);
  EXPECT_NEAR(integrate(f, IntervalSet{{0.0, 1.0 / 3.0}}), 0.14, 0.01);
}

TEST(Integrate, AdditiveAndMonotone) {
  const auto f = invariant_density(builtin("example")).density;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    double p[4] = {u(rng), u(rng), u(rng), u(rng)};
    std::sort(p, p + 4);
    const IntervalSet a{{p[0], p[1]}};
    const IntervalSet b{{p[2], p[3]}};
    EXPECT_NEAR(integrate(f, a.unite(b)), integrate(f, a) + integrate(f, b), 1e-12);
    EXPECT_LE(integrate(f, a), integrate(f, IntervalSet{{p[0], p[3]}}) + 1e-15);
  }
}

TEST(Sample, UniformPassesKs) {
  const auto u = DensityGrid::uniform(4096);
  Rng rng(17);
  std::vector<double> xs(1'000'000);
  for (auto& x : xs) x = sample(u, rng);
  EXPECT_LT(oracle::ks_uniform(xs), 0.002);
}

TEST(Sample, ConcentratedDensityStaysInBin) {
  const auto f = one_bin(1024, 300);
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const double x = sample(f, rng);
    ASSERT_GE(x, 300.0 / 1024);
    ASSERT_LE(x, 301.0 / 1024);
  }
}

TEST(Sample, ExampleMapMassBelowThreshold) {
  const auto f = invariant_density(builtin("example")).density;
  const double p0 = integrate(f, IntervalSet{{0.0, 1.0 / 3.0}});
  Rng rng(99);
  std::size_t below = 0;
  const std::size_t n = 1'000'000;
  for (std::size_t i = 0; i < n; ++i) below += sample(f, rng) < 1.0 / 3.0;
  const double frac = static_cast<double>(below) / n;
  EXPECT_NEAR(frac, 0.14, 0.01);
  EXPECT_NEAR(frac, p0, 0.002);
}

TEST(DensityCsv, HeaderAndRows) {
  const auto csv = density_to_csv(DensityGrid::uniform(64));
  EXPECT_EQ(csv.rfind("bin_left,bin_right,density\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
}

#include <benchmark/benchmark.h>

#include "chaosrng/density.hpp"
#include "chaosrng/entropy.hpp"
#include "chaosrng/map.hpp"
#include "chaosrng/postproc.hpp"
#include "chaosrng/robustness.hpp"
#include "chaosrng/stat_tests.hpp"
#include "chaosrng/symbolic.hpp"

using namespace chaosrng;

static void BM_UlamMatrix(benchmark::State& state) {
  const auto map = builtin("example");
  const UlamOptions opts{.n_bins = static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ulam_matrix(map, opts));
}
BENCHMARK(BM_UlamMatrix)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond);

static void BM_UlamMatrixStratified(benchmark::State& state) {
  const auto map = builtin("example");
  const UlamOptions opts{.n_bins = 4096, .scheme = UlamScheme::stratified};
  for (auto _ : state) benchmark::DoNotOptimize(ulam_matrix(map, opts));
}
BENCHMARK(BM_UlamMatrixStratified)->Unit(benchmark::kMillisecond);

static void BM_SteadyState(benchmark::State& state) {
  const auto op = ulam_matrix(builtin("example"), {.n_bins = static_cast<std::size_t>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(op));
}
BENCHMARK(BM_SteadyState)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

static void BM_Refine(benchmark::State& state) {
  const auto map = builtin("example");
  const auto gen = builtin_bitgen("example");
  const auto measure = StateMeasure::from_invariant(invariant_density(map));
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(refine(map, gen, depth, measure));
}
BENCHMARK(BM_Refine)->DenseRange(6, 14, 4)->Unit(benchmark::kMillisecond);

static void BM_GenerateBits(benchmark::State& state) {
  const auto map = builtin("zigzag");
  const auto f = DensityGrid::uniform(4096);
  const auto gen = builtin_bitgen("zigzag");
  for (auto _ : state) benchmark::DoNotOptimize(generate_bits(map, gen, f, 1'000'000, 1));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_GenerateBits)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalEntropy(benchmark::State& state) {
  const auto map = builtin("example");
  const auto gen = builtin_bitgen("example");
  const auto bits = generate_bits(map, gen, invariant_density(map).density, 1'000'000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_entropy(bits.view(), 10));
}
BENCHMARK(BM_EmpiricalEntropy)->Unit(benchmark::kMillisecond);

static void BM_StatBattery(benchmark::State& state) {
  const auto map = builtin("zigzag");
  const auto bits = generate_bits(map, builtin_bitgen("zigzag"), DensityGrid::uniform(4096),
                                  1'000'000, 3);
  for (auto _ : state) {
    for (const auto& name : stat::test_names()) {
      benchmark::DoNotOptimize(stat::run_test(name, bits.view()));
    }
  }
}
BENCHMARK(BM_StatBattery)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloTrial(benchmark::State& state) {
  const auto map = builtin("zigzag");
  const auto gen = builtin_bitgen("zigzag");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mc_profile(map, gen, {.trials = 1, .seed = ++seed}));
}
BENCHMARK(BM_MonteCarloTrial)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <vector>

#include "rangebandit/environments.hpp"
#include "rangebandit/rng.hpp"
#include "rangebandit/spectral.hpp"

using namespace rangebandit;

static void BM_BanditLowerBoundEnv(benchmark::State& state) {
  const std::vector<double> eps(10, 0.2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++, StreamRole::environment);
    benchmark::DoNotOptimize(bandit_lower_bound_env(eps, 10000, rng));
  }
}
BENCHMARK(BM_BanditLowerBoundEnv);

static void BM_SmoothRandomEnv(benchmark::State& state) {
  const GraphSpec g = GraphSpec::complete(static_cast<std::size_t>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++, StreamRole::environment);
    benchmark::DoNotOptimize(
        smooth_random_env(g, 0.5, 1000, AnchorMode::min_loss, rng));
  }
}
BENCHMARK(BM_SmoothRandomEnv)->Arg(8)->Arg(32);

static void BM_OctopusAdversary(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++, StreamRole::environment);
    benchmark::DoNotOptimize(octopus_adversary(33, 8, 1.0, 1000, rng));
  }
}
BENCHMARK(BM_OctopusAdversary);

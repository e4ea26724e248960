#include <benchmark/benchmark.h>

#include "rangebandit/rng.hpp"
#include "rangebandit/spectral.hpp"

using namespace rangebandit;

static void BM_LaplacianEigensolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1, StreamRole::auxiliary);
  const GraphSpec g = random_connected_graph(n, 0.1, rng);
  for (auto _ : state) {
    const LaplacianView lap(g);
    benchmark::DoNotOptimize(algebraic_connectivity(lap));
  }
}
BENCHMARK(BM_LaplacianEigensolve)->Arg(8)->Arg(64)->Arg(256);

static void BM_AnchoredNormProgram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2, StreamRole::auxiliary);
  const LaplacianView lap(random_connected_graph(n, 0.2, rng));
  std::size_t anchor = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(anchored_norm_program(lap, 0.5, anchor));
    anchor = (anchor + 1) % n;
  }
}
BENCHMARK(BM_AnchoredNormProgram)->Arg(8)->Arg(64);

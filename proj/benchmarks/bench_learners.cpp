#include <benchmark/benchmark.h>

#include "rangebandit/learners.hpp"
#include "rangebandit/rng.hpp"

using namespace rangebandit;

static void BM_Exp3Round(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Exp3 learner(k, 0.05);
  Rng rng(1, StreamRole::learner);
  for (auto _ : state) {
    const std::size_t arm = sample(learner.distribution(), rng);
    learner.observe(arm, rng.uniform());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exp3Round)->Arg(2)->Arg(10)->Arg(100)->Arg(1000);

static void BM_DoublingExp3Round(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  DoublingExp3 learner(k);
  Rng rng(2, StreamRole::learner);
  for (auto _ : state) {
    const std::size_t arm = sample(learner.distribution(), rng);
    learner.observe(arm, rng.uniform());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DoublingExp3Round)->Arg(10)->Arg(100);

static void BM_HedgeRound(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Hedge learner(k, 0.05);
  Rng rng(3, StreamRole::learner);
  std::vector<double> losses(k);
  for (auto _ : state) {
    for (double& l : losses) l = rng.uniform();
    learner.observe_full(losses);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HedgeRound)->Arg(10)->Arg(100);

#include <benchmark/benchmark.h>

#include <vector>

#include "rangebandit/learners.hpp"
#include "rangebandit/reduction.hpp"
#include "rangebandit/rng.hpp"

using namespace rangebandit;

static void BM_MetaRound(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng env(1, StreamRole::environment);
  std::vector<SideInfo> sides;
  std::vector<std::vector<double>> losses;
  for (int t = 0; t < 256; ++t) {
    std::vector<double> m(k), eps(k), l(k);
    for (std::size_t i = 0; i < k; ++i) {
      eps[i] = env.uniform(0.0, 0.2);
      m[i] = env.uniform(eps[i], 1.0 - eps[i]);
      l[i] = env.uniform(m[i] - eps[i], m[i] + eps[i]);
    }
    sides.emplace_back(m, eps);
    losses.push_back(l);
  }
  Exp3 inner(k, 0.05);
  Rng rng(2, StreamRole::learner);
  std::size_t t = 0;
  for (auto _ : state) {
    const auto& l = losses[t % losses.size()];
    const MetaRound round =
        meta_round(inner, sides[t % sides.size()],
                   [&](std::size_t i) { return l[i]; }, FeedbackMode::bandit,
                   rng);
    benchmark::DoNotOptimize(round.played);
    ++t;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MetaRound)->Arg(10)->Arg(100);

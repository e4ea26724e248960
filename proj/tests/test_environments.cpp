#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "rangebandit/environments.hpp"
#include "rangebandit/errors.hpp"
#include "rangebandit/learners.hpp"
#include "rangebandit/rng.hpp"
#include "rangebandit/spectral.hpp"

using namespace rangebandit;

namespace {

double column_sum(const EnvironmentInstance& env, std::size_t arm) {
  double acc = 0.0;
  for (std::size_t t = 0; t < env.horizon; ++t) acc += env.loss(t, arm);
  return acc;
}

double edge_energy(std::span<const double> l, const GraphSpec& g) {
  double acc = 0.0;
  for (const auto& [i, j] : g.edges()) acc += (l[i] - l[j]) * (l[i] - l[j]);
  return acc;
}

}  // namespace

TEST(LowerBoundWeights, EqualRadii) {
  const std::vector<double> eps(4, 0.1);
  for (double p : lower_bound_weights(eps)) EXPECT_NEAR(p, 0.25, 1e-15);
  for (double d : lower_bound_bias(eps, 400)) {
    EXPECT_NEAR(d, std::sqrt(4.0) / std::sqrt(400.0), 1e-15);
  }
}

TEST(LowerBoundWeights, ZeroRadiusHasNoBias) {
  const std::vector<double> eps{0.3, 0.0, 0.4};
  const auto p = lower_bound_weights(eps);
  EXPECT_NEAR(p[0], 0.09 / 0.25, 1e-15);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_EQ(lower_bound_bias(eps, 100)[1], 0.0);
}

TEST(BanditLowerBound, LossesTakeExactlyTwoValues) {
  const std::vector<double> eps{0.1, 0.2, 0.15, 0.05};
  Rng rng(3, StreamRole::environment);
  const auto env = bandit_lower_bound_env(eps, 2000, rng);
  ASSERT_TRUE(validate_environment(env).ok());
  for (std::size_t t = 0; t < env.horizon; ++t) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double dev = std::abs(env.loss(t, i) - 0.2);
      EXPECT_NEAR(dev, eps[i], 1e-15);
      EXPECT_EQ(env.side_info(t).center(i), 0.2);
    }
  }
}

TEST(BanditLowerBound, ZeroRadiusArmIsConstant) {
  const std::vector<double> eps{0.2, 0.0, 0.2};
  Rng rng(4, StreamRole::environment);
  const auto env = bandit_lower_bound_env(eps, 500, rng);
  for (std::size_t t = 0; t < env.horizon; ++t) EXPECT_EQ(env.loss(t, 1), 0.2);
  EXPECT_NE(*env.hidden_best, 1u);
}

TEST(BanditLowerBound, RejectsInadmissibleRadii) {
  Rng rng(5, StreamRole::environment);
  const std::vector<double> tiny{0.3, 0.01};
  try {
    bandit_lower_bound_env(tiny, 100, rng);
    FAIL() << "expected rejection";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("(2/T) sum eps^2"), std::string::npos);
  }
  const std::vector<double> wide{0.6, 0.6};
  EXPECT_THROW(bandit_lower_bound_env(wide, 1000, rng), InvalidInput);
  const std::vector<double> short_horizon{0.2, 0.2};
  EXPECT_THROW(bandit_lower_bound_env(short_horizon, 3, rng), InvalidInput);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_THROW(bandit_lower_bound_env(zero, 100, rng), InvalidInput);
  const std::vector<double> one{0.2};
  EXPECT_THROW(bandit_lower_bound_env(one, 100, rng), InvalidInput);
}

TEST(BanditLowerBound, HiddenArmHasSmallestExpectedLoss) {
  // Average the gap between the hidden arm's column and the others over
  // independent instances and compare with -T eps delta.
  const std::size_t k = 12;
  const std::size_t horizon = 2000;
  const std::vector<double> eps(k, 0.2);
  const double delta = lower_bound_bias(eps, horizon)[0];
  const double expected = -static_cast<double>(horizon) * 0.2 * delta;

  const int trials = 200;
  std::vector<double> gaps;
  for (int n = 0; n < trials; ++n) {
    Rng rng(100 + n, StreamRole::environment);
    const auto env = bandit_lower_bound_env(eps, horizon, rng);
    const std::size_t j = *env.hidden_best;
    double others = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != j) others += column_sum(env, i);
    }
    gaps.push_back(column_sum(env, j) - others / static_cast<double>(k - 1));
  }
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / trials;
  double var = 0.0;
  for (double g : gaps) var += (g - mean) * (g - mean);
  const double se = std::sqrt(var / (trials - 1) / trials);
  EXPECT_LT(mean + 3.0 * se, 0.0);
  EXPECT_NEAR(mean, expected, 3.0 * se);
}

TEST(BanditLowerBound, HiddenArmDrawFollowsWeights) {
  const std::vector<double> eps{0.1, 0.3};
  int hits = 0;
  const int trials = 4000;
  for (int n = 0; n < trials; ++n) {
    Rng rng(7000 + n, StreamRole::environment);
    hits += bandit_lower_bound_env(eps, 50, rng).hidden_best == 1u ? 1 : 0;
  }
  const double p = 0.9;
  const double se = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(static_cast<double>(hits) / trials, p, 3.0 * se);
}

TEST(FullInfoLowerBound, Construction) {
  const std::vector<double> eps{0.1, 0.3, 0.2};
  Rng rng(8, StreamRole::environment);
  const auto env = fullinfo_lower_bound_env(eps, 100, rng);
  EXPECT_NEAR(env.parameters.at("delta"), 0.05, 1e-15);
  EXPECT_EQ(env.parameters.at("i_max"), 1.0);
  const double z = env.parameters.at("z");
  EXPECT_EQ(*env.hidden_best, z > 0 ? 0u : 1u);
  for (std::size_t t = 0; t < env.horizon; ++t) {
    EXPECT_EQ(env.loss(t, 0), 0.3);
    EXPECT_EQ(env.loss(t, 2), 0.3);
    EXPECT_TRUE(env.loss(t, 1) == 0.0 || env.loss(t, 1) == 0.6);
  }
  const std::vector<double> wide{0.6, 0.1};
  EXPECT_THROW(fullinfo_lower_bound_env(wide, 100, rng), InvalidInput);
}

TEST(FullInfoLowerBound, MeanOfVaryingArm) {
  const std::vector<double> eps{0.25, 0.1};
  const std::size_t horizon = 100000;
  Rng rng(9, StreamRole::environment);
  const auto env = fullinfo_lower_bound_env(eps, horizon, rng);
  const double z = env.parameters.at("z");
  const double delta = env.parameters.at("delta");
  const double mean = column_sum(env, 0) / static_cast<double>(horizon);
  const double p = (1.0 - z * delta) / 2.0;
  const double se = 0.5 * std::sqrt(p * (1 - p) / horizon);
  EXPECT_NEAR(mean, (1.0 - z * delta) * 0.25, 3.0 * se);
}

TEST(IntervalEnv, SharedCentersAreCommonToAllArms) {
  const std::vector<double> eps{0.1, 0.05, 0.08};
  Rng rng(10, StreamRole::environment);
  const auto env = interval_env(eps, 1000, 0.4, 0.6, CenterMode::shared, rng);
  ASSERT_TRUE(validate_environment(env).ok());
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const SideInfo side = env.side_info(t);
    EXPECT_GE(side.center(0), 0.4);
    EXPECT_LE(side.center(0), 0.6);
    EXPECT_EQ(side.center(1), side.center(0));
    EXPECT_EQ(side.center(2), side.center(0));
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(std::abs(env.loss(t, i) - side.center(i)), eps[i], 1e-12);
    }
  }
}

TEST(IntervalEnv, PerArmCentersDiffer) {
  const std::vector<double> eps{0.1, 0.1};
  Rng rng(11, StreamRole::environment);
  const auto env = interval_env(eps, 200, 0.3, 0.7, CenterMode::per_arm, rng);
  std::size_t distinct = 0;
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const SideInfo side = env.side_info(t);
    if (side.center(0) != side.center(1)) ++distinct;
  }
  EXPECT_EQ(distinct, env.horizon);
  EXPECT_THROW(interval_env(eps, 200, 0.05, 0.5, CenterMode::shared, rng),
               InvalidInput);
  EXPECT_THROW(interval_env(eps, 200, 0.6, 0.5, CenterMode::shared, rng),
               InvalidInput);
}

TEST(OctopusAdversary, BudgetHoldsOnEveryRound) {
  struct Case {
    std::size_t k, d;
    double c;
  };
  for (const Case& c : {Case{9, 2, 0.5}, Case{17, 4, 1.0}, Case{33, 8, 2.0}}) {
    Rng rng(12 + c.k, StreamRole::environment);
    const auto env = octopus_adversary(c.k, c.d, c.c, 1000, rng);
    ASSERT_TRUE(validate_environment(env).ok());
    for (std::size_t t = 0; t < env.horizon; ++t) {
      ASSERT_LE(edge_energy(env.row(t), *env.graph), c.c * c.c + 1e-12);
      EXPECT_EQ(env.loss(t, c.k - 1), 0.5);
      EXPECT_EQ(env.anchors[t], 0.5);
    }
    const std::size_t target = *env.hidden_best;
    EXPECT_EQ(octopus_node(c.k, c.d, target).position, c.d);
  }
}

TEST(OctopusAdversary, TargetEndpointIsLowered) {
  Rng rng(13, StreamRole::environment);
  const auto env = octopus_adversary(9, 2, 0.5, 500, rng);
  const std::size_t target = *env.hidden_best;
  const double gap = env.parameters.at("Delta");
  EXPECT_GT(gap, 0.0);
  for (std::size_t node = 0; node + 1 < 9; ++node) {
    if (node == target || octopus_node(9, 2, node).position != 2) continue;
    EXPECT_NEAR(column_sum(env, node) - column_sum(env, target),
                gap * static_cast<double>(env.horizon), 1e-9);
  }
}

TEST(OctopusAdversary, SaturationCountsClipEvents) {
  Rng rng(14, StreamRole::environment);
  const auto env = octopus_adversary(5, 2, 100.0, 400, rng);
  EXPECT_EQ(env.parameters.at("b"), 0.5);
  EXPECT_GT(env.clip_events, 0u);
  for (double l : env.losses) {
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
  }
  EXPECT_THROW(octopus_adversary(5, 2, 0.0, 10, rng), InvalidInput);
  EXPECT_THROW(octopus_adversary(6, 2, 1.0, 10, rng), InvalidInput);
}

TEST(SmoothRandom, ZeroBudgetGivesConstantRows) {
  Rng rng(15, StreamRole::environment);
  const GraphSpec g = random_connected_graph(7, 0.3, rng);
  const auto env = smooth_random_env(g, 0.0, 300, AnchorMode::min_loss, rng);
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto row = env.row(t);
    for (double l : row) EXPECT_EQ(l, row[0]);
    EXPECT_EQ(env.anchors[t], row[0]);
  }
}

TEST(SmoothRandom, CliqueDeviationBound) {
  const std::size_t k = 8;
  const double c = 0.3 * std::sqrt(static_cast<double>(k));
  Rng rng(16, StreamRole::environment);
  const GraphSpec g = GraphSpec::complete(k);
  const auto env = smooth_random_env(g, c, 2000, AnchorMode::any_arm, rng);
  ASSERT_TRUE(validate_environment(env).ok());
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto row = env.row(t);
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / k;
    double dev = 0.0;
    for (double l : row) dev += (l - mean) * (l - mean);
    ASSERT_LE(dev, 0.09 + 1e-12);
    ASSERT_LE(edge_energy(row, g), c * c + 1e-12);
    EXPECT_EQ(env.anchors[t], row[env.anchored_arms[t]]);
  }
}

TEST(SmoothRandom, MinLossAnchorsAreRowMinima) {
  Rng rng(17, StreamRole::environment);
  const GraphSpec g = GraphSpec::path(6);
  const auto env = smooth_random_env(g, 0.5, 500, AnchorMode::min_loss, rng);
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto row = env.row(t);
    EXPECT_EQ(env.anchors[t], *std::min_element(row.begin(), row.end()));
    EXPECT_EQ(env.loss(t, env.anchored_arms[t]), env.anchors[t]);
  }
}

TEST(Oscillating, BestArmNeverWorseAndRangeBounded) {
  Rng rng(18, StreamRole::environment);
  const auto env = oscillating_env(5, 4000, std::nullopt, rng);
  const double gap = std::sqrt(5.0 / 4000.0);
  EXPECT_NEAR(*env.effective_range, gap, 1e-15);
  const std::size_t best = *env.hidden_best;
  EXPECT_NE(env.anchored_arms[0], best);
  std::size_t saturated = 0;
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto row = env.row(t);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    EXPECT_LE(*hi - *lo, gap + 1e-15);
    EXPECT_EQ(*lo, row[best]);
    if (row[best] == 1.0) {
      ++saturated;
      for (double l : row) EXPECT_EQ(l, 1.0);
    }
  }
  EXPECT_GT(saturated, 0u);
  EXPECT_THROW(oscillating_env(5, 100, 1.5, rng), InvalidInput);
}

TEST(Validator, FlagsEachBrokenPromise) {
  Rng rng(19, StreamRole::environment);
  const std::vector<double> eps{0.1, 0.1, 0.1};
  const auto base = bandit_lower_bound_env(eps, 100, rng);

  auto out_of_range = base;
  out_of_range.losses[5] = 1.5;
  EXPECT_FALSE(validate_environment(out_of_range).ok());

  auto bad_interval = base;
  bad_interval.side_radius[3] = 0.01;
  EXPECT_FALSE(validate_environment(bad_interval).ok());

  auto oct = octopus_adversary(9, 2, 0.5, 50, rng);
  oct.budget = 0.01;
  EXPECT_FALSE(validate_environment(oct).ok());

  auto smooth = smooth_random_env(GraphSpec::path(4), 0.5, 50,
                                  AnchorMode::min_loss, rng);
  smooth.anchors[7] += 0.01;
  EXPECT_FALSE(validate_environment(smooth).ok());

  auto osc = oscillating_env(3, 100, 0.2, rng);
  osc.effective_range = 0.0;
  const bool any_gap = [&] {
    for (std::size_t t = 0; t < osc.horizon; ++t) {
      const auto row = osc.row(t);
      if (*std::max_element(row.begin(), row.end()) !=
          *std::min_element(row.begin(), row.end())) {
        return true;
      }
    }
    return false;
  }();
  EXPECT_EQ(validate_environment(osc).ok(), !any_gap);
}

TEST(Obliviousness, LearnersCannotTouchTheMatrix) {
  Rng rng(20, StreamRole::environment);
  const std::vector<double> eps(5, 0.2);
  const auto env = bandit_lower_bound_env(eps, 3000, rng);
  const std::vector<double> before = env.losses;
  for (double eta : {0.01, 0.5}) {
    Exp3 learner(5, eta);
    Rng lrng(21, StreamRole::learner);
    for (std::size_t t = 0; t < env.horizon; ++t) {
      const std::size_t arm = sample(learner.distribution(), lrng);
      learner.observe(arm, env.loss(t, arm));
    }
    EXPECT_EQ(env.losses, before);
  }
  Rng again(20, StreamRole::environment);
  EXPECT_EQ(bandit_lower_bound_env(eps, 3000, again).losses, before);
}

TEST(EnvironmentKind, RoundTripsNames) {
  for (auto kind :
       {EnvironmentKind::bandit_lower_bound, EnvironmentKind::fullinfo_lower_bound,
        EnvironmentKind::interval, EnvironmentKind::octopus,
        EnvironmentKind::smooth_random, EnvironmentKind::oscillating,
        EnvironmentKind::imported}) {
    EXPECT_EQ(parse_environment_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_environment_kind("nope"), InvalidInput);
}

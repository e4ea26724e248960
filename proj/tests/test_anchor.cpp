#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "rangebandit/anchor.hpp"
#include "rangebandit/environments.hpp"
#include "rangebandit/errors.hpp"
#include "rangebandit/learners.hpp"
#include "rangebandit/rng.hpp"

using namespace rangebandit;

TEST(ShiftLoss, AnyArm) {
  EXPECT_NEAR(shift_loss(0.3, 0.7, AnchorMode::any_arm), 0.6, 1e-15);
  EXPECT_EQ(shift_loss(0.7, 0.7, AnchorMode::any_arm), 1.0);
}

TEST(ShiftLoss, MinLoss) {
  const std::vector<double> l{0.3, 0.7};
  const auto s = shift_losses(l, 0.3, AnchorMode::min_loss);
  EXPECT_EQ(s[0], 0.0);
  EXPECT_NEAR(s[1], 0.4, 1e-15);
  EXPECT_THROW(shift_loss(0.2, 0.3, AnchorMode::min_loss), ContractViolation);
}

TEST(AnchoredExp3, AnchorIsReadAfterTheDraw) {
  AnchoredExp3 learner(std::make_unique<Exp3>(3, 0.1), AnchorMode::any_arm);
  Rng rng(1, StreamRole::learner);
  bool arm_queried = false;
  const auto round = learner.round(
      [&](std::size_t) {
        arm_queried = true;
        return 0.25;
      },
      [&] {
        EXPECT_TRUE(arm_queried);
        return 0.5;
      },
      rng);
  EXPECT_EQ(round.observed, 0.25);
  EXPECT_EQ(round.anchor, 0.5);
  EXPECT_EQ(round.shifted, 0.75);
  EXPECT_THROW(AnchoredExp3(nullptr, AnchorMode::any_arm), InvalidInput);
}

TEST(AnchoredExp3, ConstantRoundsInMinLossModeGiveZeroRegret) {
  AnchoredExp3 learner(std::make_unique<Exp3>(4, 0.5), AnchorMode::min_loss);
  Rng env(2, StreamRole::environment);
  Rng rng(2, StreamRole::learner);
  RegretTrace trace(4);
  for (int t = 0; t < 1000; ++t) {
    const std::vector<double> losses(4, env.uniform());
    const auto round = learner.round([&](std::size_t i) { return losses[i]; },
                                     [&] { return losses[0]; }, rng);
    trace.record(round.arm, losses);
  }
  EXPECT_EQ(regret(trace), 0.0);
  const Distribution p = learner.distribution();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(p[i], 0.25);
}

TEST(AnchoredExp3, TranslationLeavesArmSequenceUnchanged) {
  // Full-vector exponential weights on l and on l + c draw the same arms.
  ExpWeights a(5, 0.3);
  ExpWeights b(5, 0.3);
  Rng ra(4, StreamRole::learner);
  Rng rb(4, StreamRole::learner);
  Rng env(4, StreamRole::environment);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> l(5);
    for (double& x : l) x = env.uniform();
    std::vector<double> shifted = l;
    for (double& x : shifted) x += 0.4;
    ASSERT_EQ(sample(a.distribution(), ra), sample(b.distribution(), rb));
    a.update(l);
    b.update(shifted);
  }
}

TEST(AnchoredExp3, HedgeTranslationInvariance) {
  Hedge a(4, 0.4);
  Hedge b(4, 0.4);
  Rng env(6, StreamRole::environment);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> l(4);
    for (double& x : l) x = env.uniform();
    std::vector<double> shifted = l;
    for (double& x : shifted) x += 0.75;
    a.observe_full(l);
    b.observe_full(shifted);
    const Distribution pa = a.distribution();
    const Distribution pb = b.distribution();
    for (std::size_t i = 0; i < 4; ++i) ASSERT_NEAR(pa[i], pb[i], 1e-12);
  }
}

TEST(AnchorDiagnostics, BoundsOnSmoothEnvironment) {
  Rng rng(8, StreamRole::environment);
  const GraphSpec g = random_connected_graph(6, 0.3, rng);
  const double budget = 0.4;
  const auto env = smooth_random_env(g, budget, 400, AnchorMode::any_arm, rng);
  const LaplacianView lap(g);
  const AnchorDiagnostics diag(lap, budget, AnchorMode::any_arm);
  const double nominal = 1.0 + budget * budget / algebraic_connectivity(lap);
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto shifted =
        shift_losses(env.row(t), env.anchors[t], AnchorMode::any_arm);
    ASSERT_NEAR(shifted[env.anchored_arms[t]], 1.0, 1e-15);
    const auto r = diag.evaluate(env.row(t), env.anchors[t], env.anchored_arms[t]);
    double norm = 0.0;
    double raw = 0.0;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      norm += shifted[i] * shifted[i];
      raw += env.loss(t, i) * env.loss(t, i);
    }
    ASSERT_NEAR(r.shifted_norm_sq, norm, 1e-12);
    ASSERT_LE(r.shifted_norm_sq, r.exact_bound * (1 + 1e-9));
    ASSERT_NEAR(r.nominal_bound, nominal, 1e-12);
    ASSERT_NEAR(r.cormin, std::min(raw, nominal), 1e-12);
  }
}

TEST(AnchorDiagnostics, MinLossBound) {
  Rng rng(9, StreamRole::environment);
  const GraphSpec g = GraphSpec::path(5);
  const double budget = 0.3;
  const auto env = smooth_random_env(g, budget, 400, AnchorMode::min_loss, rng);
  const AnchorDiagnostics diag(LaplacianView(g), budget, AnchorMode::min_loss);
  for (std::size_t t = 0; t < env.horizon; ++t) {
    const auto shifted =
        shift_losses(env.row(t), env.anchors[t], AnchorMode::min_loss);
    ASSERT_EQ(shifted[env.anchored_arms[t]], 0.0);
    const auto r = diag.evaluate(env.row(t), env.anchors[t], env.anchored_arms[t]);
    ASSERT_LE(r.shifted_norm_sq, r.exact_bound * (1 + 1e-9));
  }
  EXPECT_THROW(AnchorDiagnostics(LaplacianView(GraphSpec::empty(3)), 1.0,
                                 AnchorMode::any_arm),
               RankDeficient);
}

TEST(ComponentSideInfo, TwoPathsExample) {
  const GraphSpec g(4, {{0, 1}, {2, 3}});
  const auto comps = ComponentSideInfo::from_graph(
      g, 1.0, RadiusRule::algebraic_connectivity);
  ASSERT_EQ(comps.num_components(), 2u);
  const std::vector<double> anchors{0.2, 0.9};
  const SideInfo side = multicomponent_sideinfo(comps, anchors);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(side.radius(i), 1.0 / std::sqrt(2.0), 1e-12);
  }
  EXPECT_EQ(side.center(0), 0.2);
  EXPECT_EQ(side.center(1), 0.2);
  EXPECT_EQ(side.center(2), 0.9);
  EXPECT_EQ(side.center(3), 0.9);

  // The truthful rule uses the grounded minor: radius C / sqrt(1).
  const auto exact =
      ComponentSideInfo::from_graph(g, 1.0, RadiusRule::grounded_minor);
  EXPECT_NEAR(exact.radius(0), 1.0, 1e-12);
  EXPECT_NEAR(exact.nominal_radius(0), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(ComponentSideInfo, ZeroBudgetPlaysLowestAnchorComponent) {
  const GraphSpec g(5, {{0, 1}, {2, 3}, {3, 4}});
  const auto comps = ComponentSideInfo::from_graph(g, 0.0);
  const std::vector<double> anchors{0.6, 0.3};
  const SideInfo side = multicomponent_sideinfo(comps, anchors);
  const auto cls = classify_arms(side);
  EXPECT_EQ(cls.reference, 2u);
  EXPECT_FALSE(cls.is_good(0));
  EXPECT_TRUE(cls.is_good(4));
}

TEST(ComponentSideInfo, SingletonsNeedDeclaration) {
  const GraphSpec g(3, {{0, 1}});
  EXPECT_THROW(ComponentSideInfo::from_graph(g, 1.0), InvalidInput);
  const auto comps = ComponentSideInfo::from_graph(
      g, 1.0, RadiusRule::grounded_minor, true);
  EXPECT_EQ(comps.radius(comps.component_of(2)), 0.0);
}

TEST(ComponentSideInfo, RejectsBadPartitions) {
  const GraphSpec g(4, {{0, 1}, {2, 3}});
  EXPECT_THROW(ComponentSideInfo(g, {{{0, 2}, false}, {{1, 3}, false}}, 1.0),
               InvalidInput);
  EXPECT_THROW(ComponentSideInfo(g, {{{0, 1}, false}}, 1.0), InvalidInput);
  EXPECT_THROW(
      ComponentSideInfo(g, {{{0, 1}, false}, {{1, 2, 3}, false}}, 1.0),
      InvalidInput);
  EXPECT_THROW(ComponentSideInfo(g, {{{0, 1}, false}, {{2, 3}, false}}, -1.0),
               InvalidInput);
}

TEST(ComponentSideInfo, GroundedMinorIntervalsHoldOnSmoothLosses) {
  Rng rng(12, StreamRole::environment);
  const GraphSpec g(7, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 6}, {3, 6}});
  const double budget = 0.5;
  for (AnchorMode mode : {AnchorMode::any_arm, AnchorMode::min_loss}) {
    const auto env = smooth_random_env(g, budget, 500, mode, rng);
    const auto comps =
        ComponentSideInfo::from_graph(g, budget, RadiusRule::grounded_minor);
    for (std::size_t t = 0; t < env.horizon; ++t) {
      const SideInfo side =
          multicomponent_sideinfo(comps, env.component_anchor_row(t));
      ASSERT_TRUE(side.contains(env.row(t))) << "t=" << t;
    }
  }
}

TEST(ComponentSideInfo, SingleComponentBoundTerm) {
  const GraphSpec g = GraphSpec::complete(4);
  const auto comps = ComponentSideInfo::from_graph(
      g, 2.0, RadiusRule::algebraic_connectivity);
  const std::vector<double> anchors{0.5};
  const SideInfo side = multicomponent_sideinfo(comps, anchors);
  // C^2/lambda2 = 1; one good component of 4 arms: 1 + 4 * 1.
  EXPECT_NEAR(multicomponent_bound_term(comps, side), 5.0, 1e-12);
  // Same intervals drive the reduction's bandit term: K r^2 + sum r^2.
  EXPECT_NEAR(bandit_range_term(side), 8.0, 1e-12);
}

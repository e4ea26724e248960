#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rangebandit/learners.hpp"
#include "rangebandit/reduction.hpp"
#include "rangebandit/spectral.hpp"

namespace rangebandit {

enum class AnchorMode {
  any_arm,   // a_t is the loss of some arm; learner sees l + 1 - a_t
  min_loss,  // a_t = min_i l_t(i); learner sees l - a_t
};

/// any_arm: observed + 1 - anchor (in [0, 2] for unit losses).
/// min_loss: observed - anchor; throws ContractViolation when negative.
double shift_loss(double observed, double anchor, AnchorMode mode);
std::vector<double> shift_losses(std::span<const double> losses, double anchor,
                                 AnchorMode mode);

/// Called after the round's arm is drawn; returns a_t.
using AnchorQuery = std::function<double()>;

struct AnchoredRound {
  std::size_t arm;
  double observed;
  double anchor;
  double shifted;
};

/// Exp3 (or any bandit learner) run on anchor-shifted losses.
class AnchoredExp3 {
 public:
  AnchoredExp3(std::unique_ptr<Learner> inner, AnchorMode mode);

  AnchorMode mode() const { return mode_; }
  const Learner& inner() const { return *inner_; }
  Distribution distribution() const { return inner_->distribution(); }

  /// Draw, play, then read the anchor and feed the shifted loss.
  AnchoredRound round(const LossQuery& query, const AnchorQuery& anchor,
                      Rng& rng);

 private:
  std::unique_ptr<Learner> inner_;
  AnchorMode mode_;
};

/// Per-round bound diagnostics for a fixed published graph and budget.
/// Recorded only; learners never read them.
class AnchorDiagnostics {
 public:
  struct Round {
    double shifted_norm_sq;  // ||shifted l_t||^2
    double exact_bound;      // exact worst case of the same quantity
    double nominal_bound;    // 1 + C^2/lambda_2 (any_arm) or C^2/lambda_2
    double cormin;           // min{||l_t||^2, nominal_bound}
  };

  AnchorDiagnostics(const LaplacianView& lap, double budget, AnchorMode mode);

  Round evaluate(std::span<const double> losses, double anchor,
                 std::size_t anchored_arm) const;

 private:
  AnchorMode mode_;
  double nominal_;
  std::vector<double> exact_by_arm_;
};

enum class RadiusRule {
  algebraic_connectivity,  // C / sqrt(lambda_2(L(s)))
  grounded_minor,          // C / sqrt(min_i mu_1(L(s) without i)), never smaller
};

struct Component {
  std::vector<std::size_t> arms;
  /// Singletons have no edges; they are accepted only when declared to
  /// carry exactly the anchor's loss, which gives radius 0.
  bool declared_constant = false;
};

/// Component partition of the arms with one interval radius per component.
class ComponentSideInfo {
 public:
  ComponentSideInfo(const GraphSpec& g, std::vector<Component> components,
                    double budget,
                    RadiusRule rule = RadiusRule::algebraic_connectivity);

  /// Uses the graph's own connected components.
  static ComponentSideInfo from_graph(
      const GraphSpec& g, double budget,
      RadiusRule rule = RadiusRule::algebraic_connectivity,
      bool singletons_constant = false);

  std::size_t num_arms() const { return component_of_.size(); }
  std::size_t num_components() const { return components_.size(); }
  std::size_t component_of(std::size_t arm) const { return component_of_[arm]; }
  const Component& component(std::size_t s) const { return components_[s]; }
  std::size_t component_size(std::size_t s) const {
    return components_[s].arms.size();
  }
  double radius(std::size_t s) const { return radius_[s]; }
  double nominal_radius(std::size_t s) const { return nominal_radius_[s]; }
  double exact_radius(std::size_t s) const { return exact_radius_[s]; }
  double budget() const { return budget_; }
  RadiusRule rule() const { return rule_; }

 private:
  std::vector<Component> components_;
  std::vector<std::size_t> component_of_;
  std::vector<double> radius_;
  std::vector<double> nominal_radius_;
  std::vector<double> exact_radius_;
  double budget_;
  RadiusRule rule_;
};

/// m(i) = anchor of i's component, radius(i) = that component's radius.
SideInfo multicomponent_sideinfo(const ComponentSideInfo& components,
                                 std::span<const double> component_anchors);

/// Per-round term of the multi-component regret bound:
///   C^2/lambda_2(s_min) + sum over good components of N(s) C^2/lambda_2(s),
/// with lambda_2 read back from the nominal radii. Diagnostic only.
double multicomponent_bound_term(const ComponentSideInfo& components,
                                 const SideInfo& side);

}  // namespace rangebandit

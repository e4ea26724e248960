#include "rangebandit/anchor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rangebandit {

double shift_loss(double observed, double anchor, AnchorMode mode) {
  if (mode == AnchorMode::any_arm) return observed + 1.0 - anchor;
  const double shifted = observed - anchor;
  if (shifted < 0.0) {
    std::ostringstream msg;
    msg << "shift_loss: observed loss " << observed
        << " is below the announced minimum " << anchor;
    throw ContractViolation(msg.str());
  }
  return shifted;
}

std::vector<double> shift_losses(std::span<const double> losses, double anchor,
                                 AnchorMode mode) {
  std::vector<double> out(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out[i] = shift_loss(losses[i], anchor, mode);
  }
  return out;
}

AnchoredExp3::AnchoredExp3(std::unique_ptr<Learner> inner, AnchorMode mode)
    : inner_(std::move(inner)), mode_(mode) {
  if (!inner_) throw InvalidInput("AnchoredExp3: no inner learner");
}

AnchoredRound AnchoredExp3::round(const LossQuery& query,
                                  const AnchorQuery& anchor, Rng& rng) {
  const Distribution p = inner_->distribution();
  const std::size_t arm = sample(p, rng);
  const double observed = query(arm);
  const double a = anchor();
  const double shifted = shift_loss(observed, a, mode_);
  if (!(shifted >= 0.0)) {
    throw ContractViolation("AnchoredExp3: negative shifted loss");
  }
  inner_->observe(arm, shifted);
  return AnchoredRound{arm, observed, a, shifted};
}

AnchorDiagnostics::AnchorDiagnostics(const LaplacianView& lap, double budget,
                                     AnchorMode mode)
    : mode_(mode), exact_by_arm_(lap.size()) {
  if (!lap.connected()) {
    throw RankDeficient("AnchorDiagnostics: published graph is disconnected");
  }
  const double c2_over_l2 = budget * budget / algebraic_connectivity(lap);
  nominal_ = mode == AnchorMode::any_arm ? 1.0 + c2_over_l2 : c2_over_l2;
  for (std::size_t k = 0; k < lap.size(); ++k) {
    if (mode == AnchorMode::any_arm) {
      exact_by_arm_[k] = anchored_norm_program(lap, budget, k);
    } else {
      const double r = extremal_range(lap, budget, k, 0.0).exact;
      exact_by_arm_[k] = r * r;
    }
  }
}

AnchorDiagnostics::Round AnchorDiagnostics::evaluate(
    std::span<const double> losses, double anchor,
    std::size_t anchored_arm) const {
  if (losses.size() != exact_by_arm_.size() ||
      anchored_arm >= exact_by_arm_.size()) {
    throw InvalidInput("AnchorDiagnostics::evaluate: size mismatch");
  }
  double shifted_sq = 0.0;
  double raw_sq = 0.0;
  for (double l : losses) {
    const double s =
        mode_ == AnchorMode::any_arm ? l + 1.0 - anchor : l - anchor;
    shifted_sq += s * s;
    raw_sq += l * l;
  }
  return Round{shifted_sq, exact_by_arm_[anchored_arm], nominal_,
               std::min(raw_sq, nominal_)};
}

ComponentSideInfo::ComponentSideInfo(const GraphSpec& g,
                                     std::vector<Component> components,
                                     double budget, RadiusRule rule)
    : components_(std::move(components)),
      component_of_(g.num_nodes(), std::numeric_limits<std::size_t>::max()),
      budget_(budget),
      rule_(rule) {
  if (!(budget >= 0.0)) throw InvalidInput("ComponentSideInfo: negative budget");
  for (std::size_t s = 0; s < components_.size(); ++s) {
    const Component& comp = components_[s];
    if (comp.arms.empty()) throw InvalidInput("ComponentSideInfo: empty component");
    for (std::size_t arm : comp.arms) {
      if (arm >= g.num_nodes()) {
        throw InvalidInput("ComponentSideInfo: arm out of range");
      }
      if (component_of_[arm] != std::numeric_limits<std::size_t>::max()) {
        throw InvalidInput("ComponentSideInfo: arm " + std::to_string(arm) +
                           " appears in two components");
      }
      component_of_[arm] = s;
    }
  }
  for (std::size_t arm = 0; arm < component_of_.size(); ++arm) {
    if (component_of_[arm] == std::numeric_limits<std::size_t>::max()) {
      throw InvalidInput("ComponentSideInfo: arm " + std::to_string(arm) +
                         " belongs to no component");
    }
  }

  for (const Component& comp : components_) {
    if (comp.arms.size() == 1) {
      if (!comp.declared_constant) {
        throw InvalidInput(
            "ComponentSideInfo: singleton component has no algebraic "
            "connectivity; declare it constant to use radius 0");
      }
      nominal_radius_.push_back(0.0);
      exact_radius_.push_back(0.0);
      radius_.push_back(0.0);
      continue;
    }
    const LaplacianView lap(induced_subgraph(g, comp.arms));
    if (!lap.connected()) {
      throw InvalidInput("ComponentSideInfo: component is not connected");
    }
    const double nominal = budget / std::sqrt(algebraic_connectivity(lap));
    double worst = 0.0;
    for (std::size_t i = 0; i < lap.size(); ++i) {
      worst = std::max(worst, extremal_range(lap, budget, i, 0.0).exact);
    }
    nominal_radius_.push_back(nominal);
    exact_radius_.push_back(worst);
    radius_.push_back(rule == RadiusRule::algebraic_connectivity ? nominal
                                                                 : worst);
  }
}

ComponentSideInfo ComponentSideInfo::from_graph(const GraphSpec& g,
                                                double budget, RadiusRule rule,
                                                bool singletons_constant) {
  const std::vector<std::size_t> label = connected_components(g);
  const std::size_t count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<Component> comps(count);
  for (std::size_t i = 0; i < label.size(); ++i) {
    comps[label[i]].arms.push_back(i);
  }
  for (Component& c : comps) {
    c.declared_constant = singletons_constant && c.arms.size() == 1;
  }
  return ComponentSideInfo(g, std::move(comps), budget, rule);
}

SideInfo multicomponent_sideinfo(const ComponentSideInfo& components,
                                 std::span<const double> component_anchors) {
  if (component_anchors.size() != components.num_components()) {
    throw InvalidInput("multicomponent_sideinfo: one anchor per component");
  }
  std::vector<double> center(components.num_arms());
  std::vector<double> radius(components.num_arms());
  for (std::size_t i = 0; i < center.size(); ++i) {
    const std::size_t s = components.component_of(i);
    center[i] = component_anchors[s];
    radius[i] = components.radius(s);
  }
  return SideInfo(std::move(center), std::move(radius));
}

double multicomponent_bound_term(const ComponentSideInfo& components,
                                 const SideInfo& side) {
  const ArmClassification cls = classify_arms(side);
  std::size_t s_min = 0;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < components.num_components(); ++s) {
    const double m = side.center(components.component(s).arms.front());
    const double low = m - components.nominal_radius(s);
    if (low < lowest) {
      lowest = low;
      s_min = s;
    }
  }
  const double r_min = components.nominal_radius(s_min);
  double term = r_min * r_min;
  for (std::size_t s = 0; s < components.num_components(); ++s) {
    if (!cls.is_good(components.component(s).arms.front())) continue;
    const double r = components.nominal_radius(s);
    term += static_cast<double>(components.component_size(s)) * r * r;
  }
  return term;
}

}  // namespace rangebandit

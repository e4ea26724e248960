#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rangebandit/core.hpp"
#include "rangebandit/learners.hpp"

namespace rangebandit {

/// Per-round interval side information: l(i) is promised to lie in
/// [center(i) - radius(i), center(i) + radius(i)].
class SideInfo {
 public:
  SideInfo(std::vector<double> center, std::vector<double> radius);

  std::size_t size() const { return center_.size(); }
  std::span<const double> center() const { return center_; }
  std::span<const double> radius() const { return radius_; }
  double center(std::size_t i) const { return center_[i]; }
  double radius(std::size_t i) const { return radius_[i]; }

  /// True when |losses(i) - center(i)| <= radius(i) for every arm.
  bool contains(std::span<const double> losses) const;

 private:
  std::vector<double> center_;
  std::vector<double> radius_;
};

struct ArmClassification {
  std::size_t reference;
  std::vector<bool> good;

  bool is_good(std::size_t i) const { return good[i]; }
  std::size_t num_good() const;
};

/// argmin_i center(i) - radius(i); ties go to the smaller radius, then to
/// the lower index.
std::size_t select_reference_arm(const SideInfo& side);

/// Arm i is bad iff center(i) - radius(i) > center(j) + radius(j) for the
/// reference arm j. Exact comparisons; boundary arms are good.
ArmClassification classify_arms(const SideInfo& side);

/// Good arm: loss - center(j) + radius(j), which must land in
/// [0, 2(radius(i) + radius(j))]. Bad arm: 2 radius(j), loss unused.
/// Results within rounding distance of the range are snapped onto it;
/// anything further out throws ContractViolation.
double transform_loss(double loss, std::size_t arm, const SideInfo& side,
                      const ArmClassification& cls);

std::vector<double> transform_losses(std::span<const double> losses,
                                     const SideInfo& side,
                                     const ArmClassification& cls);

/// Distribution of the arm actually played when the inner learner draws
/// from `inner`: bad-arm mass moves onto the reference arm.
Distribution induced_distribution(const Distribution& inner,
                                  const ArmClassification& cls);

/// Answers "what is the loss of arm i this round".
using LossQuery = std::function<double(std::size_t)>;

struct MetaRound {
  std::size_t recommended;
  std::size_t played;
  double incurred;
  ArmClassification classification;
  Distribution inner_distribution;
  Distribution induced;
  /// Bandit mode: the transformed loss fed at `recommended`.
  double fed_loss;
};

/// One round of the interval reduction around `inner`:
///  draw a recommendation from the inner learner, play it if good and the
///  reference arm otherwise, then feed the inner learner the transformed
///  loss of its own recommendation. In bandit mode the environment is
///  queried for the played arm only.
MetaRound meta_round(Learner& inner, const SideInfo& side,
                     const LossQuery& query, FeedbackMode mode, Rng& rng);

/// Per-round variance proxy from the bandit regret bound:
/// K radius(j)^2 + sum over good arms of radius(i)^2.
double bandit_range_term(const SideInfo& side);
/// max_i radius(i)^2, the full-information counterpart.
double full_range_term(const SideInfo& side);

/// sqrt(log K / sum_t term_t), the step size that balances the two terms
/// of the bound. Returns 1 when every term is zero.
double tuned_step_size(std::size_t num_arms, double sum_of_terms);

}  // namespace rangebandit

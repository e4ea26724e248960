#include "rangebandit/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rangebandit {

SideInfo::SideInfo(std::vector<double> center, std::vector<double> radius)
    : center_(std::move(center)), radius_(std::move(radius)) {
  if (center_.empty()) throw InvalidInput("SideInfo: no arms");
  if (center_.size() != radius_.size()) {
    throw InvalidInput("SideInfo: center and radius sizes differ");
  }
  for (std::size_t i = 0; i < radius_.size(); ++i) {
    if (!(radius_[i] >= 0.0) || !std::isfinite(radius_[i]) ||
        !std::isfinite(center_[i])) {
      throw InvalidInput("SideInfo: radius must be finite and nonnegative");
    }
  }
}

bool SideInfo::contains(std::span<const double> losses) const {
  if (losses.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(losses[i] - center_[i]) > radius_[i]) return false;
  }
  return true;
}

std::size_t ArmClassification::num_good() const {
  return static_cast<std::size_t>(std::count(good.begin(), good.end(), true));
}

std::size_t select_reference_arm(const SideInfo& side) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < side.size(); ++i) {
    const double low_i = side.center(i) - side.radius(i);
    const double low_best = side.center(best) - side.radius(best);
    if (low_i < low_best ||
        (low_i == low_best && side.radius(i) < side.radius(best))) {
      best = i;
    }
  }
  return best;
}

ArmClassification classify_arms(const SideInfo& side) {
  ArmClassification cls{select_reference_arm(side),
                        std::vector<bool>(side.size(), true)};
  const double top = side.center(cls.reference) + side.radius(cls.reference);
  for (std::size_t i = 0; i < side.size(); ++i) {
    cls.good[i] = !(side.center(i) - side.radius(i) > top);
  }
  return cls;
}

double transform_loss(double loss, std::size_t arm, const SideInfo& side,
                      const ArmClassification& cls) {
  const std::size_t j = cls.reference;
  if (!cls.is_good(arm)) return 2.0 * side.radius(j);

  const double value = loss - side.center(j) + side.radius(j);
  const double upper = 2.0 * (side.radius(arm) + side.radius(j));
  const double slack =
      1e-12 * (1.0 + std::abs(side.center(j)) + std::abs(loss));
  if (value < -slack || value > upper + slack || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "transform_loss: arm " << arm << " loss " << loss
        << " breaks its interval (transformed " << value << ", allowed [0, "
        << upper << "])";
    throw ContractViolation(msg.str());
  }
  return std::clamp(value, 0.0, upper);
}

std::vector<double> transform_losses(std::span<const double> losses,
                                     const SideInfo& side,
                                     const ArmClassification& cls) {
  if (losses.size() != side.size()) {
    throw InvalidInput("transform_losses: size mismatch");
  }
  std::vector<double> out(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out[i] = transform_loss(losses[i], i, side, cls);
  }
  return out;
}

Distribution induced_distribution(const Distribution& inner,
                                  const ArmClassification& cls) {
  if (inner.size() != cls.good.size()) {
    throw InvalidInput("induced_distribution: size mismatch");
  }
  std::vector<double> p(inner.probs().begin(), inner.probs().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!cls.is_good(i)) {
      p[cls.reference] += p[i];
      p[i] = 0.0;
    }
  }
  return Distribution(std::move(p));
}

MetaRound meta_round(Learner& inner, const SideInfo& side,
                     const LossQuery& query, FeedbackMode mode, Rng& rng) {
  if (inner.num_arms() != side.size()) {
    throw InvalidInput("meta_round: learner and side info disagree on K");
  }
  ArmClassification cls = classify_arms(side);
  Distribution inner_dist = inner.distribution();
  Distribution induced = induced_distribution(inner_dist, cls);
  const std::size_t recommended = sample(inner_dist, rng);
  const std::size_t played =
      cls.is_good(recommended) ? recommended : cls.reference;

  double incurred = 0.0;
  double fed = 0.0;
  if (mode == FeedbackMode::bandit) {
    incurred = query(played);
    fed = transform_loss(incurred, recommended, side, cls);
    inner.observe(recommended, fed);
  } else {
    std::vector<double> losses(side.size());
    for (std::size_t i = 0; i < losses.size(); ++i) losses[i] = query(i);
    incurred = losses[played];
    const std::vector<double> transformed = transform_losses(losses, side, cls);
    fed = transformed[recommended];
    inner.observe_full(transformed);
  }
  return MetaRound{recommended,
                   played,
                   incurred,
                   std::move(cls),
                   std::move(inner_dist),
                   std::move(induced),
                   fed};
}

double bandit_range_term(const SideInfo& side) {
  const ArmClassification cls = classify_arms(side);
  const double rj = side.radius(cls.reference);
  double term = static_cast<double>(side.size()) * rj * rj;
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (cls.is_good(i)) term += side.radius(i) * side.radius(i);
  }
  return term;
}

double full_range_term(const SideInfo& side) {
  double top = 0.0;
  for (double r : side.radius()) top = std::max(top, r * r);
  return top;
}

double tuned_step_size(std::size_t num_arms, double sum_of_terms) {
  if (num_arms < 2) throw InvalidInput("tuned_step_size: need two arms");
  if (!(sum_of_terms > 0.0)) return 1.0;
  return std::sqrt(std::log(static_cast<double>(num_arms)) / sum_of_terms);
}

}  // namespace rangebandit

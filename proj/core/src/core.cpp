#include "rangebandit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rangebandit {

Distribution::Distribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidInput("Distribution: no arms");
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidInput("Distribution: entry " + std::to_string(i) +
                         " is negative or not finite");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidInput("Distribution: probabilities sum to " +
                       std::to_string(total));
  }
}

Distribution Distribution::normalized(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidInput("Distribution::normalized: bad weight");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw InvalidInput("Distribution::normalized: weights sum to zero");
  }
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& p : probs) p /= total;
  return Distribution(std::move(probs));
}

Distribution Distribution::uniform(std::size_t num_arms) {
  if (num_arms == 0) throw InvalidInput("Distribution::uniform: no arms");
  return Distribution(
      std::vector<double>(num_arms, 1.0 / static_cast<double>(num_arms)));
}

double Distribution::expectation(std::span<const double> values) const {
  if (values.size() != probs_.size()) {
    throw InvalidInput("Distribution::expectation: size mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) acc += probs_[i] * values[i];
  return acc;
}

std::size_t sample_with_uniform(const Distribution& dist, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw InvalidInput("sample_with_uniform: u outside [0, 1)");
  }
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    cumulative += dist[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  // Rounding left the total a hair below u.
  return last_positive;
}

std::size_t sample(const Distribution& dist, Rng& rng) {
  return sample_with_uniform(dist, rng.uniform());
}

RegretTrace::RegretTrace(std::size_t num_arms)
    : cumulative_losses_(num_arms, 0.0) {
  if (num_arms == 0) throw InvalidInput("RegretTrace: no arms");
}

void RegretTrace::record(std::size_t arm, std::span<const double> losses,
                         std::optional<double> anchor) {
  if (losses.size() != cumulative_losses_.size()) {
    throw InvalidInput("RegretTrace::record: loss vector size mismatch");
  }
  if (arm >= losses.size()) {
    throw InvalidInput("RegretTrace::record: arm out of range");
  }
  for (std::size_t i = 0; i < losses.size(); ++i) {
    cumulative_losses_[i] += losses[i];
  }
  incurred_ += losses[arm];
  records_.push_back({records_.size() + 1, arm, losses[arm], anchor});
  const double best =
      *std::min_element(cumulative_losses_.begin(), cumulative_losses_.end());
  cumulative_regret_.push_back(incurred_ - best);
}

double regret(const RegretTrace& trace) {
  if (trace.rounds() == 0) throw InvalidInput("regret: empty trace");
  return trace.cumulative_regret().back();
}

}  // namespace rangebandit

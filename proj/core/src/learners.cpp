#include "rangebandit/learners.hpp"

#include <algorithm>
#include <cmath>

namespace rangebandit {

namespace {

void require_nonnegative(std::span<const double> losses, const char* where) {
  for (double v : losses) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(where) +
                         ": losses must be finite and nonnegative");
    }
  }
}

}  // namespace

ExpWeights::ExpWeights(std::size_t num_arms, double eta)
    : log_weights_(num_arms, 0.0), eta_(eta) {
  if (num_arms < 2) throw InvalidInput("ExpWeights: need at least two arms");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidInput("ExpWeights: step size must be positive");
  }
}

Distribution ExpWeights::distribution() const {
  const double top =
      *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> w(log_weights_.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_weights_[i] - top);
  }
  return Distribution::normalized(w);
}

void ExpWeights::update(std::span<const double> losses) {
  if (losses.size() != log_weights_.size()) {
    throw InvalidInput("ExpWeights::update: size mismatch");
  }
  require_nonnegative(losses, "ExpWeights::update");
  for (std::size_t i = 0; i < losses.size(); ++i) {
    log_weights_[i] -= eta_ * losses[i];
  }
  const double top =
      *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& lw : log_weights_) lw -= top;
  ++rounds_;
}

std::vector<double> exp3_estimate(double observed_loss, std::size_t arm,
                                  const Distribution& dist) {
  if (arm >= dist.size()) throw InvalidInput("exp3_estimate: arm out of range");
  if (!(dist[arm] > 0.0)) {
    throw InvalidInput("exp3_estimate: chosen arm has zero probability");
  }
  if (!(observed_loss >= 0.0)) {
    throw InvalidInput("exp3_estimate: observed loss must be nonnegative");
  }
  std::vector<double> estimate(dist.size(), 0.0);
  estimate[arm] = observed_loss / dist[arm];
  return estimate;
}

double estimator_second_moment(const Distribution& dist,
                               std::span<const double> estimate) {
  if (estimate.size() != dist.size()) {
    throw InvalidInput("estimator_second_moment: size mismatch");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    q += dist[i] * estimate[i] * estimate[i];
  }
  return q;
}

Distribution hedge_step(ExpWeights& state, std::span<const double> losses) {
  Distribution played = state.distribution();
  state.update(losses);
  return played;
}

int doubling_first_epoch(std::size_t num_arms) {
  if (num_arms < 2) throw InvalidInput("doubling: need at least two arms");
  const double log_k = std::log(static_cast<double>(num_arms));
  return static_cast<int>(std::ceil(std::log2(log_k) + 1.0));
}

double doubling_eta(std::size_t num_arms, int epoch) {
  const double log_k = std::log(static_cast<double>(num_arms));
  return std::sqrt(2.0 * log_k / std::ldexp(1.0, epoch));
}

DoublingState::DoublingState(std::size_t num_arms)
    : num_arms_(num_arms),
      epoch_(doubling_first_epoch(num_arms)),
      weights_(num_arms, doubling_eta(num_arms, epoch_)) {}

bool DoublingState::step(double second_moment) {
  if (!(second_moment >= 0.0)) {
    throw InvalidInput("DoublingState::step: Q must be nonnegative");
  }
  accumulated_ += second_moment;
  if (accumulated_ <= std::ldexp(1.0, epoch_)) return false;
  ++epoch_;
  ++restarts_;
  accumulated_ = 0.0;
  weights_ = ExpWeights(num_arms_, doubling_eta(num_arms_, epoch_));
  return true;
}

Exp3::Exp3(std::size_t num_arms, double eta) : weights_(num_arms, eta) {
  totals_.per_arm.assign(num_arms, 0.0);
}

void Exp3::observe(std::size_t arm, double loss) {
  const Distribution p = weights_.distribution();
  const std::vector<double> estimate = exp3_estimate(loss, arm, p);
  last_q_ = estimator_second_moment(p, estimate);
  totals_.mixed_loss += p.expectation(estimate);
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    totals_.per_arm[i] += estimate[i];
  }
  totals_.second_moment += last_q_;
  weights_.update(estimate);
}

void Exp3::observe_full(std::span<const double>) {
  throw InvalidInput("Exp3 takes bandit feedback only");
}

DoublingExp3::DoublingExp3(std::size_t num_arms) : state_(num_arms) {}

void DoublingExp3::observe(std::size_t arm, double loss) {
  const Distribution p = state_.weights().distribution();
  const std::vector<double> estimate = exp3_estimate(loss, arm, p);
  const double q = estimator_second_moment(p, estimate);
  state_.weights().update(estimate);
  state_.step(q);
}

void DoublingExp3::observe_full(std::span<const double>) {
  throw InvalidInput("DoublingExp3 takes bandit feedback only");
}

Hedge::Hedge(std::size_t num_arms, double eta) : weights_(num_arms, eta) {}

void Hedge::observe(std::size_t, double) {
  throw InvalidInput("Hedge needs full-information feedback");
}

void Hedge::observe_full(std::span<const double> losses) {
  hedge_step(weights_, losses);
}

}  // namespace rangebandit

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rangebandit/core.hpp"

namespace rangebandit {

/// Exponential-weights state shared by Exp3 and Hedge. Weights are kept in
/// the log domain and shifted so the largest log-weight is zero; importance
/// weighted losses of size 1/p would underflow raw weights quickly.
class ExpWeights {
 public:
  /// Uniform start. Requires num_arms >= 2 and eta > 0.
  ExpWeights(std::size_t num_arms, double eta);

  std::size_t num_arms() const { return log_weights_.size(); }
  double eta() const { return eta_; }
  std::size_t rounds() const { return rounds_; }
  std::span<const double> log_weights() const { return log_weights_; }

  Distribution distribution() const;

  /// w(i) <- w(i) * exp(-eta * losses(i)). Losses must be nonnegative;
  /// shifted or transformed losses have to be made so by the caller.
  void update(std::span<const double> losses);

 private:
  std::vector<double> log_weights_;
  double eta_;
  std::size_t rounds_ = 0;
};

/// Importance-weighted estimate: observed / p(arm) at `arm`, zero elsewhere.
std::vector<double> exp3_estimate(double observed_loss, std::size_t arm,
                                  const Distribution& dist);

/// Q = sum_i p(i) * estimate(i)^2, the observable the doubling trick tracks.
double estimator_second_moment(const Distribution& dist,
                               std::span<const double> estimate);

/// One Hedge round: returns the distribution the round is played with and
/// applies the full-information update.
Distribution hedge_step(ExpWeights& state, std::span<const double> losses);

/// First epoch of the doubling schedule, ceil(log2(log K) + 1).
int doubling_first_epoch(std::size_t num_arms);
/// eta_r = sqrt(2 log K / 2^r).
double doubling_eta(std::size_t num_arms, int epoch);

class DoublingState {
 public:
  explicit DoublingState(std::size_t num_arms);

  int epoch() const { return epoch_; }
  double accumulated() const { return accumulated_; }
  std::size_t restarts() const { return restarts_; }
  const ExpWeights& weights() const { return weights_; }
  ExpWeights& weights() { return weights_; }

  /// Adds one round's Q. When the epoch total exceeds 2^r the wrapped state
  /// is replaced by a fresh one with eta_{r+1}; the triggering round stays
  /// charged to the old epoch. Returns true on restart.
  bool step(double second_moment);

 private:
  std::size_t num_arms_;
  int epoch_;
  double accumulated_ = 0.0;
  std::size_t restarts_ = 0;
  ExpWeights weights_;
};

enum class FeedbackMode { bandit, full };

/// Something that proposes a distribution each round and learns from
/// nonnegative losses.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::size_t num_arms() const = 0;
  virtual Distribution distribution() const = 0;
  /// Bandit feedback for an arm drawn from distribution().
  virtual void observe(std::size_t arm, double loss) = 0;
  /// Full-information feedback.
  virtual void observe_full(std::span<const double> losses) = 0;
  virtual std::size_t restarts() const { return 0; }
};

/// Running sums of the quantities in the per-realization Exp3 inequality
///   sum_t <p_t, est_t> - sum_t est_t(k) <= log K / eta + eta/2 sum_t Q_t.
struct Exp3Totals {
  double mixed_loss = 0.0;
  std::vector<double> per_arm;
  double second_moment = 0.0;
};

/// Exp3 without uniform exploration mixing.
class Exp3 final : public Learner {
 public:
  Exp3(std::size_t num_arms, double eta);

  std::size_t num_arms() const override { return weights_.num_arms(); }
  Distribution distribution() const override {
    return weights_.distribution();
  }
  void observe(std::size_t arm, double loss) override;
  void observe_full(std::span<const double> losses) override;

  const ExpWeights& weights() const { return weights_; }
  const Exp3Totals& totals() const { return totals_; }
  double last_second_moment() const { return last_q_; }

 private:
  ExpWeights weights_;
  Exp3Totals totals_;
  double last_q_ = 0.0;
};

/// Exp3 retuned by the doubling trick on sum_s Q_s.
class DoublingExp3 final : public Learner {
 public:
  explicit DoublingExp3(std::size_t num_arms);

  std::size_t num_arms() const override {
    return state_.weights().num_arms();
  }
  Distribution distribution() const override {
    return state_.weights().distribution();
  }
  void observe(std::size_t arm, double loss) override;
  void observe_full(std::span<const double> losses) override;
  std::size_t restarts() const override { return state_.restarts(); }

  const DoublingState& state() const { return state_; }

 private:
  DoublingState state_;
};

class Hedge final : public Learner {
 public:
  Hedge(std::size_t num_arms, double eta);

  std::size_t num_arms() const override { return weights_.num_arms(); }
  Distribution distribution() const override {
    return weights_.distribution();
  }
  void observe(std::size_t arm, double loss) override;
  void observe_full(std::span<const double> losses) override;

  const ExpWeights& weights() const { return weights_; }

 private:
  ExpWeights weights_;
};

}  // namespace rangebandit

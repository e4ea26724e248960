#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rangebandit/errors.hpp"
#include "rangebandit/rng.hpp"

namespace rangebandit {

/// Tolerance used when a probability vector is handed in from outside.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Probability vector over K arms. Always nonnegative and summing to one
/// within kProbabilityTolerance; the constructor rejects anything else.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs);

  /// Renormalizes nonnegative weights with positive total.
  static Distribution normalized(std::span<const double> weights);
  static Distribution uniform(std::size_t num_arms);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  /// Sum_i p(i) * values(i).
  double expectation(std::span<const double> values) const;

 private:
  std::vector<double> probs_;
};

/// Inverse-CDF draw in stored arm order from a single uniform u in [0, 1).
/// Arms with zero probability are never returned.
std::size_t sample_with_uniform(const Distribution& dist, double u);

/// Consumes exactly one uniform draw from rng.
std::size_t sample(const Distribution& dist, Rng& rng);

/// Which range a loss vector is known to live in.
enum class LossRange {
  unit,         // raw environment losses, [0, 1]
  transformed,  // reduction output, [0, 2(eps(i) + eps(j_t))]
  shifted,      // anchor-shifted losses, [0, 2] or [0, 1]
};

struct LossVector {
  std::vector<double> values;
  std::size_t round = 1;  // 1-based
  LossRange range = LossRange::unit;

  std::size_t size() const { return values.size(); }
};

struct RoundRecord {
  std::size_t t;  // 1-based
  std::size_t arm;
  double loss;
  std::optional<double> anchor;
};

/// Per-round play log with running per-arm totals. cumulative_regret()[t-1]
/// is sum_{s<=t} l_s(I_s) - min_j sum_{s<=t} l_s(j).
class RegretTrace {
 public:
  explicit RegretTrace(std::size_t num_arms);

  void record(std::size_t arm, std::span<const double> losses,
              std::optional<double> anchor = std::nullopt);

  std::size_t num_arms() const { return cumulative_losses_.size(); }
  std::size_t rounds() const { return records_.size(); }
  const std::vector<RoundRecord>& records() const { return records_; }
  std::span<const double> cumulative_losses() const {
    return cumulative_losses_;
  }
  const std::vector<double>& cumulative_regret() const {
    return cumulative_regret_;
  }
  double incurred_loss() const { return incurred_; }

 private:
  std::vector<RoundRecord> records_;
  std::vector<double> cumulative_losses_;
  std::vector<double> cumulative_regret_;
  double incurred_ = 0.0;
};

/// sum_t l_t(I_t) - min_j sum_t l_t(j). Can be negative for a single
/// realization: a learner that switches arms may beat every fixed arm.
double regret(const RegretTrace& trace);

}  // namespace rangebandit

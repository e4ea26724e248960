#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangebandit/anchor.hpp"
#include "rangebandit/core.hpp"
#include "rangebandit/reduction.hpp"
#include "rangebandit/spectral.hpp"

namespace rangebandit {

/// T * K cap on materialized loss matrices.
inline constexpr std::size_t kMaxLossEntries = 100'000'000;

enum class EnvironmentKind {
  bandit_lower_bound,
  fullinfo_lower_bound,
  interval,
  octopus,
  smooth_random,
  oscillating,
  imported,
};

std::string to_string(EnvironmentKind kind);
EnvironmentKind parse_environment_kind(const std::string& name);

/// A fully materialized oblivious loss sequence plus everything the
/// environment promises about it. Rounds are indexed 0..T-1 here; trace and
/// CSV output use 1-based t.
struct EnvironmentInstance {
  EnvironmentKind kind = EnvironmentKind::imported;
  std::size_t num_arms = 0;
  std::size_t horizon = 0;
  std::vector<double> losses;  // row-major, horizon x num_arms

  std::optional<std::size_t> hidden_best;

  // Anchor stream (empty when the environment publishes none).
  std::optional<AnchorMode> anchor_mode;
  std::vector<double> anchors;
  std::vector<std::size_t> anchored_arms;

  // Published smoothness structure.
  std::optional<GraphSpec> graph;
  std::optional<double> budget;
  // Per-component anchors, horizon x (number of graph components).
  std::vector<double> component_anchors;

  // Declared interval side information, horizon x num_arms each.
  std::vector<double> side_center;
  std::vector<double> side_radius;

  std::optional<double> effective_range;
  std::size_t clip_events = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> parameters;

  std::span<const double> row(std::size_t t) const {
    return std::span<const double>(losses).subspan(t * num_arms, num_arms);
  }
  double loss(std::size_t t, std::size_t arm) const {
    return losses[t * num_arms + arm];
  }
  LossVector loss_vector(std::size_t t) const;

  bool has_side_info() const { return !side_center.empty(); }
  bool has_anchors() const { return !anchors.empty(); }
  bool has_component_anchors() const { return !component_anchors.empty(); }
  SideInfo side_info(std::size_t t) const;
  std::size_t num_components() const;
  std::span<const double> component_anchor_row(std::size_t t) const;
};

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Runs every truthfulness check the instance is subject to: [0, 1] range,
/// declared intervals, smoothness budget per round, anchor consistency,
/// declared effective range. Interval and budget checks allow 1e-12 of
/// rounding.
ValidationReport validate_environment(const EnvironmentInstance& env);

/// Selection weights p(j) = eps(j)^2 / sum eps^2 of the hidden arm.
std::vector<double> lower_bound_weights(std::span<const double> eps);
/// Bias delta(j) = 1{eps(j) > 0} sqrt(sum eps^2) / (eps(j) sqrt(T)).
std::vector<double> lower_bound_bias(std::span<const double> eps,
                                     std::size_t horizon);

/// Every arm centered at max_r eps(r); arm i takes center +/- eps(i) with
/// equal odds, except the hidden arm J ~ p which leans to the low value
/// with probability (1 + delta(J))/2.
EnvironmentInstance bandit_lower_bound_env(std::span<const double> eps,
                                           std::size_t horizon, Rng& rng);

/// Arms other than i_max = argmax eps sit at eps(i_max); arm i_max pays
/// 2 eps(i_max) with probability (1 - z delta)/2 and 0 otherwise, with
/// z = +/-1 drawn once and delta = 1/(2 sqrt T). Hidden comparator is arm 0
/// for z = 1 and arm 1 for z = -1.
EnvironmentInstance fullinfo_lower_bound_env(std::span<const double> eps,
                                             std::size_t horizon, Rng& rng);

enum class CenterMode {
  shared,   // one center per round, common to all arms
  per_arm,  // independent centers per round and arm
};

/// Centers m_t drawn uniformly in [center_lo, center_hi] each round, with
/// the lower-bound +/- eps process inside the intervals. Declares the
/// intervals as side information.
EnvironmentInstance interval_env(std::span<const double> eps,
                                 std::size_t horizon, double center_lo,
                                 double center_hi, CenterMode mode, Rng& rng);

/// Octopus lower-bound adversary with budget C: the center is fixed at 1/2
/// and published as the anchor; tentacle node at distance q carries
/// 1/2 + sigma_t b min{1, 2q/d} with b = min{1/2, C d / (2 sqrt k)} and a
/// fresh sign per round; one endpoint is lowered by
/// Delta = min{b, sqrt(k/T), C}/2; clipped to [0, 1].
EnvironmentInstance octopus_adversary(std::size_t k, std::size_t d,
                                      double budget, std::size_t horizon,
                                      Rng& rng);

/// Random losses with l' L l <= C^2 every round: per-component offsets
/// u in [0.25, 0.75] plus a perturbation along the nonconstant Laplacian
/// eigenvectors with energy at most (0.9 C)^2, clipped and shrunk by 0.9
/// until the budget holds.
EnvironmentInstance smooth_random_env(const GraphSpec& g, double budget,
                                      std::size_t horizon, AnchorMode mode,
                                      Rng& rng);

/// l_t(i) = clip(Z_t - Delta 1{i = i*}) with Z_t standard normal shared by
/// all arms. The anchor is the loss of a fixed arm other than i*.
/// Delta defaults to sqrt(K/T).
EnvironmentInstance oscillating_env(std::size_t num_arms, std::size_t horizon,
                                    std::optional<double> delta, Rng& rng);

}  // namespace rangebandit

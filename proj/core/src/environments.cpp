#include "rangebandit/environments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace rangebandit {

namespace {

constexpr double kRoundingSlack = 1e-12;

void check_shape(std::size_t num_arms, std::size_t horizon) {
  if (num_arms < 2) throw InvalidInput("environment: need at least two arms");
  if (horizon < 1) throw InvalidInput("environment: horizon must be >= 1");
  if (num_arms > kMaxLossEntries / horizon) {
    throw InvalidInput("environment: T * K exceeds the in-memory cap");
  }
}

EnvironmentInstance blank(EnvironmentKind kind, std::size_t num_arms,
                          std::size_t horizon, const Rng& rng) {
  EnvironmentInstance env;
  env.kind = kind;
  env.num_arms = num_arms;
  env.horizon = horizon;
  env.losses.assign(num_arms * horizon, 0.0);
  env.seed = rng.seed();
  return env;
}

void require_valid(const EnvironmentInstance& env) {
  const ValidationReport report = validate_environment(env);
  if (!report.ok()) {
    throw ContractViolation("internal error: generated " +
                            to_string(env.kind) +
                            " instance failed validation: " +
                            report.failures.front());
  }
}

double sum_of_squares(std::span<const double> eps) {
  double acc = 0.0;
  for (double e : eps) acc += e * e;
  return acc;
}

void check_radii(std::span<const double> eps) {
  if (eps.size() < 2) throw InvalidInput("environment: need at least two arms");
  for (double e : eps) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
      throw InvalidInput("environment: radii must be finite and nonnegative");
    }
  }
}

// Conditions under which the lower-bound process is well defined.
void check_lower_bound_admissible(std::span<const double> eps,
                                  std::size_t horizon) {
  const double total = sum_of_squares(eps);
  if (!(total > 0.0)) {
    throw InvalidInput("admissibility: at least one radius must be positive");
  }
  const double t = static_cast<double>(horizon);
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] > 0.0 && eps[j] * eps[j] < 2.0 / t * total) {
      std::ostringstream msg;
      msg << "admissibility: min_{eps>0} eps^2 >= (2/T) sum eps^2 fails at arm "
          << j << " (" << eps[j] * eps[j] << " < " << 2.0 / t * total << ")";
      throw InvalidInput(msg.str());
    }
  }
  for (double delta : lower_bound_bias(eps, horizon)) {
    if (delta * delta > 0.5) {
      throw InvalidInput("admissibility: delta(j)^2 <= 1/2 fails");
    }
  }
}

void fill_lower_bound_signs(EnvironmentInstance& env,
                            std::span<const double> centers_by_cell,
                            std::span<const double> eps, std::size_t hidden,
                            double hidden_bias, Rng& rng,
                            const std::function<void(std::size_t)>& per_round) {
  const std::size_t k = env.num_arms;
  for (std::size_t t = 0; t < env.horizon; ++t) {
    per_round(t);
    for (std::size_t i = 0; i < k; ++i) {
      const double u = rng.uniform();
      const double low_prob = i == hidden ? (1.0 + hidden_bias) / 2.0 : 0.5;
      const double center = centers_by_cell[t * k + i];
      env.losses[t * k + i] = u < low_prob ? center - eps[i] : center + eps[i];
    }
  }
}

}  // namespace

std::string to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::bandit_lower_bound: return "bandit_lower_bound";
    case EnvironmentKind::fullinfo_lower_bound: return "fullinfo_lower_bound";
    case EnvironmentKind::interval: return "interval";
    case EnvironmentKind::octopus: return "octopus";
    case EnvironmentKind::smooth_random: return "smooth_random";
    case EnvironmentKind::oscillating: return "oscillating";
    case EnvironmentKind::imported: return "imported";
  }
  return "unknown";
}

EnvironmentKind parse_environment_kind(const std::string& name) {
  for (EnvironmentKind k :
       {EnvironmentKind::bandit_lower_bound,
        EnvironmentKind::fullinfo_lower_bound, EnvironmentKind::interval,
        EnvironmentKind::octopus, EnvironmentKind::smooth_random,
        EnvironmentKind::oscillating, EnvironmentKind::imported}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidInput("unknown environment kind '" + name + "'");
}

LossVector EnvironmentInstance::loss_vector(std::size_t t) const {
  const auto r = row(t);
  return LossVector{std::vector<double>(r.begin(), r.end()), t + 1,
                    LossRange::unit};
}

SideInfo EnvironmentInstance::side_info(std::size_t t) const {
  if (!has_side_info()) throw InvalidInput("environment declares no side info");
  const auto off = static_cast<std::ptrdiff_t>(t * num_arms);
  const auto k = static_cast<std::ptrdiff_t>(num_arms);
  return SideInfo(
      std::vector<double>(side_center.begin() + off,
                          side_center.begin() + off + k),
      std::vector<double>(side_radius.begin() + off,
                          side_radius.begin() + off + k));
}

std::size_t EnvironmentInstance::num_components() const {
  if (!graph) return 0;
  const auto label = connected_components(*graph);
  return *std::max_element(label.begin(), label.end()) + 1;
}

std::span<const double> EnvironmentInstance::component_anchor_row(
    std::size_t t) const {
  const std::size_t s = num_components();
  return std::span<const double>(component_anchors).subspan(t * s, s);
}

ValidationReport validate_environment(const EnvironmentInstance& env) {
  ValidationReport report;
  auto fail = [&](std::string msg) { report.failures.push_back(std::move(msg)); };
  const std::size_t k = env.num_arms;
  const std::size_t n = env.horizon;

  if (k < 1 || n < 1 || env.losses.size() != k * n) {
    fail("loss matrix shape does not match T x K");
    return report;
  }
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < k; ++i) {
      const double l = env.loss(t, i);
      if (!(l >= 0.0 && l <= 1.0)) {
        fail("loss outside [0, 1] at t=" + std::to_string(t + 1) +
             " arm=" + std::to_string(i));
        return report;
      }
    }
  }
  if (env.hidden_best && *env.hidden_best >= k) fail("hidden arm out of range");

  if (env.has_side_info()) {
    if (env.side_center.size() != k * n || env.side_radius.size() != k * n) {
      fail("side information shape does not match T x K");
    } else {
      for (std::size_t c = 0; c < k * n; ++c) {
        const double dev = std::abs(env.losses[c] - env.side_center[c]);
        if (!(env.side_radius[c] >= 0.0) ||
            dev > env.side_radius[c] + kRoundingSlack) {
          fail("interval side information violated at t=" +
               std::to_string(c / k + 1) + " arm=" + std::to_string(c % k));
          break;
        }
      }
    }
  }

  if (env.graph) {
    if (env.graph->num_nodes() != k) {
      fail("published graph size differs from K");
    } else if (env.budget) {
      const double c2 = *env.budget * *env.budget;
      for (std::size_t t = 0; t < n; ++t) {
        const double s = edge_smoothness(env.row(t), *env.graph);
        if (s > c2 * (1.0 + kRoundingSlack) + kRoundingSlack) {
          std::ostringstream msg;
          msg << "smoothness budget violated at t=" << t + 1 << ": " << s
              << " > " << c2;
          fail(msg.str());
          break;
        }
      }
    }
  }

  if (env.has_anchors()) {
    if (!env.anchor_mode || env.anchors.size() != n ||
        env.anchored_arms.size() != n) {
      fail("anchor stream is incomplete");
    } else {
      for (std::size_t t = 0; t < n; ++t) {
        const auto r = env.row(t);
        const std::size_t arm = env.anchored_arms[t];
        if (arm >= k || r[arm] != env.anchors[t]) {
          fail("anchor is not the loss of its anchored arm at t=" +
               std::to_string(t + 1));
          break;
        }
        if (*env.anchor_mode == AnchorMode::min_loss &&
            env.anchors[t] != *std::min_element(r.begin(), r.end())) {
          fail("min-loss anchor is not the round minimum at t=" +
               std::to_string(t + 1));
          break;
        }
      }
    }
  }

  if (env.has_component_anchors()) {
    if (!env.graph) {
      fail("component anchors without a published graph");
    } else {
      const auto label = connected_components(*env.graph);
      const std::size_t s_count = env.num_components();
      if (env.component_anchors.size() != n * s_count) {
        fail("component anchor shape does not match T x components");
      } else {
        for (std::size_t t = 0; t < n && report.ok(); ++t) {
          const auto r = env.row(t);
          const auto anchors = env.component_anchor_row(t);
          for (std::size_t s = 0; s < s_count; ++s) {
            bool found = false;
            for (std::size_t i = 0; i < k; ++i) {
              if (label[i] == s && r[i] == anchors[s]) found = true;
            }
            if (!found) {
              fail("component anchor matches no arm of its component at t=" +
                   std::to_string(t + 1));
              break;
            }
          }
        }
      }
    }
  }

  if (env.effective_range) {
    for (std::size_t t = 0; t < n; ++t) {
      const auto r = env.row(t);
      const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
      if (*hi - *lo > *env.effective_range + kRoundingSlack) {
        fail("effective range exceeded at t=" + std::to_string(t + 1));
        break;
      }
    }
  }
  return report;
}

std::vector<double> lower_bound_weights(std::span<const double> eps) {
  const double total = sum_of_squares(eps);
  if (!(total > 0.0)) {
    throw InvalidInput("lower_bound_weights: all radii are zero");
  }
  std::vector<double> p(eps.size());
  for (std::size_t j = 0; j < eps.size(); ++j) p[j] = eps[j] * eps[j] / total;
  return p;
}

std::vector<double> lower_bound_bias(std::span<const double> eps,
                                     std::size_t horizon) {
  const double root_total = std::sqrt(sum_of_squares(eps));
  const double root_t = std::sqrt(static_cast<double>(horizon));
  std::vector<double> delta(eps.size(), 0.0);
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] > 0.0) delta[j] = root_total / (eps[j] * root_t);
  }
  return delta;
}

EnvironmentInstance bandit_lower_bound_env(std::span<const double> eps,
                                           std::size_t horizon, Rng& rng) {
  check_radii(eps);
  check_shape(eps.size(), horizon);
  check_lower_bound_admissible(eps, horizon);
  const double center = *std::max_element(eps.begin(), eps.end());
  if (center + center > 1.0) {
    throw InvalidInput("admissibility: max eps + max eps <= 1 fails");
  }
  const std::size_t k = eps.size();
  EnvironmentInstance env =
      blank(EnvironmentKind::bandit_lower_bound, k, horizon, rng);

  const std::vector<double> p = lower_bound_weights(eps);
  const std::vector<double> delta = lower_bound_bias(eps, horizon);
  const std::size_t hidden = sample(Distribution(p), rng);
  env.hidden_best = hidden;

  env.side_center.assign(k * horizon, center);
  env.side_radius.resize(k * horizon);
  for (std::size_t c = 0; c < k * horizon; ++c) env.side_radius[c] = eps[c % k];
  fill_lower_bound_signs(env, env.side_center, eps, hidden, delta[hidden], rng,
                         [](std::size_t) {});

  env.parameters["eps_sum_sq"] = sum_of_squares(eps);
  env.parameters["eps_max"] = center;
  env.parameters["delta_hidden"] = delta[hidden];
  require_valid(env);
  return env;
}

EnvironmentInstance fullinfo_lower_bound_env(std::span<const double> eps,
                                             std::size_t horizon, Rng& rng) {
  check_radii(eps);
  check_shape(eps.size(), horizon);
  const std::size_t k = eps.size();
  const std::size_t i_max = static_cast<std::size_t>(
      std::max_element(eps.begin(), eps.end()) - eps.begin());
  const double e = eps[i_max];
  if (e > 0.5) throw InvalidInput("fullinfo_lower_bound_env: need max eps <= 1/2");

  EnvironmentInstance env =
      blank(EnvironmentKind::fullinfo_lower_bound, k, horizon, rng);
  const double delta = 1.0 / (2.0 * std::sqrt(static_cast<double>(horizon)));
  const double z = rng.bernoulli(0.5) ? 1.0 : -1.0;
  env.hidden_best = z > 0 ? 0 : 1;
  const double high_prob = (1.0 - z * delta) / 2.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < k; ++i) env.losses[t * k + i] = e;
    env.losses[t * k + i_max] = rng.uniform() < high_prob ? 2.0 * e : 0.0;
  }
  env.side_center.assign(k * horizon, e);
  env.side_radius.resize(k * horizon);
  for (std::size_t c = 0; c < k * horizon; ++c) env.side_radius[c] = eps[c % k];

  env.parameters["eps_max"] = e;
  env.parameters["i_max"] = static_cast<double>(i_max);
  env.parameters["delta"] = delta;
  env.parameters["z"] = z;
  require_valid(env);
  return env;
}

EnvironmentInstance interval_env(std::span<const double> eps,
                                 std::size_t horizon, double center_lo,
                                 double center_hi, CenterMode mode, Rng& rng) {
  check_radii(eps);
  check_shape(eps.size(), horizon);
  check_lower_bound_admissible(eps, horizon);
  if (!(center_lo <= center_hi)) {
    throw InvalidInput("interval_env: center_lo must not exceed center_hi");
  }
  const double widest = *std::max_element(eps.begin(), eps.end());
  if (center_lo - widest < 0.0 || center_hi + widest > 1.0) {
    throw InvalidInput("interval_env: intervals must fit inside [0, 1]");
  }
  const std::size_t k = eps.size();
  EnvironmentInstance env = blank(EnvironmentKind::interval, k, horizon, rng);

  const std::vector<double> delta = lower_bound_bias(eps, horizon);
  const std::size_t hidden =
      sample(Distribution(lower_bound_weights(eps)), rng);
  env.hidden_best = hidden;

  env.side_center.assign(k * horizon, 0.0);
  env.side_radius.resize(k * horizon);
  for (std::size_t c = 0; c < k * horizon; ++c) env.side_radius[c] = eps[c % k];
  auto draw_centers = [&](std::size_t t) {
    if (mode == CenterMode::shared) {
      const double m = rng.uniform(center_lo, center_hi);
      for (std::size_t i = 0; i < k; ++i) env.side_center[t * k + i] = m;
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        env.side_center[t * k + i] = rng.uniform(center_lo, center_hi);
      }
    }
  };
  fill_lower_bound_signs(env, env.side_center, eps, hidden, delta[hidden], rng,
                         draw_centers);

  env.parameters["eps_sum_sq"] = sum_of_squares(eps);
  env.parameters["eps_max"] = widest;
  env.parameters["delta_hidden"] = delta[hidden];
  require_valid(env);
  return env;
}

EnvironmentInstance octopus_adversary(std::size_t k, std::size_t d,
                                      double budget, std::size_t horizon,
                                      Rng& rng) {
  if (!(budget > 0.0)) throw InvalidInput("octopus_adversary: need C > 0");
  GraphSpec g = octopus(k, d);
  check_shape(k, horizon);
  EnvironmentInstance env = blank(EnvironmentKind::octopus, k, horizon, rng);

  const double kd = static_cast<double>(k);
  const double dd = static_cast<double>(d);
  const double amplitude = std::min(0.5, budget * dd / (2.0 * std::sqrt(kd)));
  const double gap =
      std::min({amplitude,
                std::sqrt(kd / static_cast<double>(horizon)), budget}) /
      2.0;
  const std::size_t tentacles = (k - 1) / d;
  const std::size_t target = rng.index(tentacles) * d + d - 1;
  env.hidden_best = target;

  std::vector<double> profile(k, 0.0);
  for (std::size_t node = 0; node + 1 < k; ++node) {
    const OctopusNode where = octopus_node(k, d, node);
    profile[node] =
        amplitude * std::min(1.0, 2.0 * static_cast<double>(where.position) / dd);
  }

  env.anchor_mode = AnchorMode::any_arm;
  env.anchors.assign(horizon, 0.5);
  env.anchored_arms.assign(horizon, k - 1);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < k; ++i) {
      double l = 0.5 + sign * profile[i];
      if (i == target) l -= gap;
      if (l < 0.0 || l > 1.0) {
        ++env.clip_events;
        l = std::clamp(l, 0.0, 1.0);
      }
      env.losses[t * k + i] = l;
    }
  }
  env.graph = std::move(g);
  env.budget = budget;
  env.parameters["k"] = kd;
  env.parameters["d"] = dd;
  env.parameters["b"] = amplitude;
  env.parameters["Delta"] = gap;
  require_valid(env);
  return env;
}

EnvironmentInstance smooth_random_env(const GraphSpec& g, double budget,
                                      std::size_t horizon, AnchorMode mode,
                                      Rng& rng) {
  if (!(budget >= 0.0)) throw InvalidInput("smooth_random_env: need C >= 0");
  const std::size_t k = g.num_nodes();
  check_shape(k, horizon);
  EnvironmentInstance env =
      blank(EnvironmentKind::smooth_random, k, horizon, rng);
  const LaplacianView lap(g);
  const std::vector<std::size_t>& label = lap.components();
  const std::size_t s_count = lap.num_components();

  std::vector<Eigen::Index> directions;
  for (std::size_t j = 0; j < k; ++j) {
    if (lap.eigenvalues()[j] > 0.0) {
      directions.push_back(static_cast<Eigen::Index>(j));
    }
  }

  std::vector<double> offset(s_count);
  for (double& u : offset) u = rng.uniform(0.25, 0.75);
  const std::size_t global_arm = rng.index(k);
  std::vector<std::size_t> component_arm(s_count, k);
  component_arm[label[global_arm]] = global_arm;
  for (std::size_t s = 0; s < s_count; ++s) {
    if (component_arm[s] != k) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < k; ++i) {
      if (label[i] == s) members.push_back(i);
    }
    component_arm[s] = members[rng.index(members.size())];
  }

  const double c2 = budget * budget;
  Eigen::VectorXd perturbation(static_cast<Eigen::Index>(k));
  std::vector<double> coeff(directions.size());
  std::vector<double> row(k);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double energy = 0.9 * budget * std::sqrt(rng.uniform());
    double norm_sq = 0.0;
    for (double& c : coeff) {
      c = rng.normal();
      norm_sq += c * c;
    }
    perturbation.setZero();
    if (norm_sq > 0.0 && energy > 0.0) {
      const double scale = energy / std::sqrt(norm_sq);
      for (std::size_t j = 0; j < directions.size(); ++j) {
        const Eigen::Index col = directions[j];
        perturbation += scale * coeff[j] /
                        std::sqrt(lap.eigenvalues()[static_cast<std::size_t>(col)]) *
                        lap.eigenvectors().col(col);
      }
    }
    bool clipped = false;
    for (int attempt = 0;; ++attempt) {
      clipped = false;
      for (std::size_t i = 0; i < k; ++i) {
        const double raw =
            offset[label[i]] + perturbation[static_cast<Eigen::Index>(i)];
        row[i] = std::clamp(raw, 0.0, 1.0);
        clipped = clipped || row[i] != raw;
      }
      if (edge_smoothness(row, g) <= c2 || attempt > 2000) break;
      perturbation *= 0.9;
    }
    if (clipped) ++env.clip_events;
    std::copy(row.begin(), row.end(), env.losses.begin() +
                                          static_cast<std::ptrdiff_t>(t * k));
  }

  env.anchor_mode = mode;
  env.anchors.resize(horizon);
  env.anchored_arms.resize(horizon);
  env.component_anchors.resize(horizon * s_count);
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto r = env.row(t);
    if (mode == AnchorMode::any_arm) {
      env.anchored_arms[t] = global_arm;
      for (std::size_t s = 0; s < s_count; ++s) {
        env.component_anchors[t * s_count + s] = r[component_arm[s]];
      }
    } else {
      env.anchored_arms[t] = static_cast<std::size_t>(
          std::min_element(r.begin(), r.end()) - r.begin());
      for (std::size_t s = 0; s < s_count; ++s) {
        double lowest = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
          if (label[i] == s) lowest = std::min(lowest, r[i]);
        }
        env.component_anchors[t * s_count + s] = lowest;
      }
    }
    env.anchors[t] = r[env.anchored_arms[t]];
  }
  env.graph = g;
  env.budget = budget;
  env.parameters["C"] = budget;
  require_valid(env);
  return env;
}

EnvironmentInstance oscillating_env(std::size_t num_arms, std::size_t horizon,
                                    std::optional<double> delta, Rng& rng) {
  check_shape(num_arms, horizon);
  const double gap = delta.value_or(std::sqrt(static_cast<double>(num_arms) /
                                              static_cast<double>(horizon)));
  if (!(gap > 0.0 && gap < 1.0)) {
    throw InvalidInput("oscillating_env: Delta must lie in (0, 1)");
  }
  EnvironmentInstance env =
      blank(EnvironmentKind::oscillating, num_arms, horizon, rng);
  const std::size_t best = rng.index(num_arms);
  std::size_t witness = rng.index(num_arms - 1);
  if (witness >= best) ++witness;
  env.hidden_best = best;
  env.anchor_mode = AnchorMode::any_arm;
  env.anchors.resize(horizon);
  env.anchored_arms.assign(horizon, witness);
  for (std::size_t t = 0; t < horizon; ++t) {
    const double z = rng.normal();
    bool clipped = false;
    for (std::size_t i = 0; i < num_arms; ++i) {
      const double raw = i == best ? z - gap : z;
      const double l = std::clamp(raw, 0.0, 1.0);
      clipped = clipped || l != raw;
      env.losses[t * num_arms + i] = l;
    }
    if (clipped) ++env.clip_events;
    env.anchors[t] = env.loss(t, witness);
  }
  env.effective_range = gap;
  env.parameters["Delta"] = gap;
  require_valid(env);
  return env;
}

}  // namespace rangebandit

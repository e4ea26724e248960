#include "rangebandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "rangebandit/errors.hpp"
#include "rangebandit/graph_io.hpp"
#include "rangebandit/instance_io.hpp"
#include "rangebandit/learners.hpp"
#include "rangebandit/reduction.hpp"
#include "rangebandit/spectral.hpp"

namespace rangebandit {

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment.name",
    "environment.kind",
    "environment.K",
    "environment.eps",
    "environment.eps_list",
    "environment.C",
    "environment.graph",
    "environment.edge_prob",
    "environment.anchor_mode",
    "environment.delta",
    "environment.center_lo",
    "environment.center_hi",
    "environment.center_mode",
    "environment.k",
    "environment.d",
    "environment.feedback",
    "environment.path",
    "learner.kind",
    "learner.inner",
    "learner.eta",
    "learner.radius",
    "learner.singletons_constant",
    "run.T",
    "run.seed",
    "run.replicas",
    "run.threads",
    "run.trace",
    "output.dir",
    "sweep.group",
    "sweep.x",
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

LearnerKind parse_learner_kind(const std::string& name) {
  for (LearnerKind k : {LearnerKind::exp3, LearnerKind::hedge,
                        LearnerKind::reduction, LearnerKind::anchored_exp3,
                        LearnerKind::multicomponent}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown learner kind '" + name + "'");
}

AnchorMode parse_anchor_mode(const std::string& name) {
  if (name == "any_arm") return AnchorMode::any_arm;
  if (name == "min_loss") return AnchorMode::min_loss;
  throw ConfigError("unknown anchor mode '" + name + "'");
}

FeedbackMode parse_feedback(const std::string& name) {
  if (name == "bandit") return FeedbackMode::bandit;
  if (name == "full") return FeedbackMode::full;
  throw ConfigError("unknown feedback mode '" + name + "'");
}

bool declares_side_info(EnvironmentKind kind) {
  return kind == EnvironmentKind::bandit_lower_bound ||
         kind == EnvironmentKind::fullinfo_lower_bound ||
         kind == EnvironmentKind::interval ||
         kind == EnvironmentKind::imported;
}

bool declares_anchors(EnvironmentKind kind) {
  return kind == EnvironmentKind::octopus ||
         kind == EnvironmentKind::smooth_random ||
         kind == EnvironmentKind::oscillating ||
         kind == EnvironmentKind::imported;
}

void check_compatible(const ExperimentConfig& cfg) {
  const LearnerSpec& l = cfg.learner;
  const EnvironmentKind env = cfg.environment.kind;
  if (l.feedback() == FeedbackMode::full &&
      cfg.environment.feedback != FeedbackMode::full) {
    throw ConfigError(l.label() +
                      " needs full-information feedback; set "
                      "environment.feedback = full");
  }
  if (l.eta.mode == StepSize::Mode::doubling &&
      l.feedback() == FeedbackMode::full) {
    throw ConfigError("the doubling schedule drives bandit learners only");
  }
  if (l.kind == LearnerKind::reduction) {
    if (l.inner != LearnerKind::exp3 && l.inner != LearnerKind::hedge) {
      throw ConfigError("learner.inner must be exp3 or hedge");
    }
    if (!declares_side_info(env)) {
      throw ConfigError("reduction needs an environment with interval side "
                        "information, not " + to_string(env));
    }
  }
  if (l.kind == LearnerKind::anchored_exp3 && !declares_anchors(env)) {
    throw ConfigError("anchored_exp3 needs an environment with anchors, not " +
                      to_string(env));
  }
  if (l.kind == LearnerKind::multicomponent &&
      env != EnvironmentKind::smooth_random &&
      env != EnvironmentKind::imported) {
    throw ConfigError("multicomponent needs per-component anchors "
                      "(smooth_random or an imported instance)");
  }
}

void check_instance_compatible(const ExperimentConfig& cfg,
                               const EnvironmentInstance& env) {
  const LearnerKind kind = cfg.learner.kind;
  if (kind == LearnerKind::reduction && !env.has_side_info()) {
    throw ConfigError("instance declares no interval side information");
  }
  if (kind == LearnerKind::anchored_exp3 &&
      (!env.has_anchors() || !env.anchor_mode)) {
    throw ConfigError("instance publishes no anchors");
  }
  if (kind == LearnerKind::multicomponent &&
      (!env.graph || !env.budget || !env.has_component_anchors())) {
    throw ConfigError("instance publishes no graph, budget and component "
                      "anchors");
  }
}

GraphSpec build_graph(const ExperimentConfig& cfg) {
  const EnvironmentSpec& e = cfg.environment;
  if (e.graph == "clique") return GraphSpec::complete(e.num_arms);
  if (e.graph == "path") return GraphSpec::path(e.num_arms);
  if (e.graph == "empty") return GraphSpec::empty(e.num_arms);
  if (e.graph == "octopus") return octopus(e.octopus_k, e.octopus_d);
  if (e.graph == "random") {
    Rng rng(cfg.seed, StreamRole::auxiliary);
    return random_connected_graph(e.num_arms, e.edge_prob, rng);
  }
  return load_edge_list(e.graph_file);
}

std::unique_ptr<Learner> make_bandit_learner(std::size_t num_arms,
                                             const StepSize& eta,
                                             double resolved) {
  if (eta.mode == StepSize::Mode::doubling) {
    return std::make_unique<DoublingExp3>(num_arms);
  }
  return std::make_unique<Exp3>(num_arms, resolved);
}

double squared_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

double max_square(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc = std::max(acc, x * x);
  return acc;
}

// Per-round term whose sum sets the tuned step size.
double tuning_term(const ExperimentConfig& cfg, const EnvironmentInstance& env,
                   const ComponentSideInfo* components, std::size_t t) {
  const LearnerSpec& l = cfg.learner;
  switch (l.kind) {
    case LearnerKind::exp3:
      return squared_norm(env.row(t));
    case LearnerKind::hedge:
      return max_square(env.row(t));
    case LearnerKind::reduction:
      return l.inner == LearnerKind::hedge ? full_range_term(env.side_info(t))
                                           : bandit_range_term(env.side_info(t));
    case LearnerKind::anchored_exp3:
      return squared_norm(
          shift_losses(env.row(t), env.anchors[t], *env.anchor_mode));
    case LearnerKind::multicomponent:
      return bandit_range_term(
          multicomponent_sideinfo(*components, env.component_anchor_row(t)));
  }
  return 0.0;
}

double resolve_eta(const ExperimentConfig& cfg, const EnvironmentInstance& env,
                   const ComponentSideInfo* components) {
  const StepSize& eta = cfg.learner.eta;
  if (eta.mode == StepSize::Mode::fixed) return eta.value;
  if (eta.mode == StepSize::Mode::doubling) return 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < env.horizon; ++t) {
    total += tuning_term(cfg, env, components, t);
  }
  return tuned_step_size(env.num_arms, total);
}

class MeanAccumulator {
 public:
  void add(double v) {
    sum_ += v;
    ++count_;
  }
  std::optional<double> mean() const {
    if (count_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(count_);
  }

 private:
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::exp3: return "exp3";
    case LearnerKind::hedge: return "hedge";
    case LearnerKind::reduction: return "reduction";
    case LearnerKind::anchored_exp3: return "anchored_exp3";
    case LearnerKind::multicomponent: return "multicomponent";
  }
  return "unknown";
}

StepSize StepSize::parse(const std::string& text) {
  if (text == "doubling") return {Mode::doubling, 0.0};
  if (text == "tuned") return {Mode::tuned, 0.0};
  std::istringstream in(text);
  double value = 0.0;
  std::string rest;
  if (!(in >> value) || (in >> rest) || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw ConfigError("learner.eta must be a positive number, 'doubling' or "
                      "'tuned', got '" + text + "'");
  }
  return {Mode::fixed, value};
}

std::string StepSize::label() const {
  switch (mode) {
    case Mode::doubling: return "doubling";
    case Mode::tuned: return "tuned";
    case Mode::fixed: return format_double(value);
  }
  return "";
}

std::string LearnerSpec::label() const {
  std::string out = to_string(kind);
  if (kind == LearnerKind::reduction) out += "/" + to_string(inner);
  return out + "/eta=" + eta.label();
}

FeedbackMode LearnerSpec::feedback() const {
  if (kind == LearnerKind::hedge) return FeedbackMode::full;
  if (kind == LearnerKind::reduction && inner == LearnerKind::hedge) {
    return FeedbackMode::full;
  }
  return FeedbackMode::bandit;
}

ExperimentConfig parse_experiment(const KeyValueConfig& kv) {
  kv.reject_unknown(kKnownKeys);
  ExperimentConfig cfg;
  cfg.name = kv.get_string("experiment.name", "experiment");
  if (cfg.name.find_first_of(",\n\"") != std::string::npos) {
    throw ConfigError("experiment.name must not contain commas or quotes");
  }

  EnvironmentSpec& e = cfg.environment;
  try {
    e.kind = parse_environment_kind(kv.get_string("environment.kind"));
  } catch (const InvalidInput& err) {
    throw ConfigError(err.what());
  }
  e.num_arms = kv.get_size("environment.K", 0);
  e.budget = kv.get_double("environment.C", 0.0);
  e.edge_prob = kv.get_double("environment.edge_prob", 0.3);
  e.anchor_mode =
      parse_anchor_mode(kv.get_string("environment.anchor_mode", "any_arm"));
  e.delta = kv.get_optional_double("environment.delta");
  e.center_lo = kv.get_double("environment.center_lo", 0.4);
  e.center_hi = kv.get_double("environment.center_hi", 0.6);
  const std::string center_mode =
      kv.get_string("environment.center_mode", "shared");
  if (center_mode == "shared") {
    e.center_mode = CenterMode::shared;
  } else if (center_mode == "per_arm") {
    e.center_mode = CenterMode::per_arm;
  } else {
    throw ConfigError("environment.center_mode must be shared or per_arm");
  }
  e.octopus_k = kv.get_size("environment.k", 0);
  e.octopus_d = kv.get_size("environment.d", 0);
  e.feedback = parse_feedback(kv.get_string(
      "environment.feedback",
      e.kind == EnvironmentKind::fullinfo_lower_bound ? "full" : "bandit"));

  if (kv.has("environment.eps_list")) {
    e.eps = kv.get_doubles("environment.eps_list");
    if (e.num_arms != 0 && e.num_arms != e.eps.size()) {
      throw ConfigError("environment.K disagrees with environment.eps_list");
    }
    e.num_arms = e.eps.size();
  } else if (kv.has("environment.eps")) {
    if (e.num_arms == 0) {
      throw ConfigError("environment.eps needs environment.K");
    }
    e.eps.assign(e.num_arms, kv.get_double("environment.eps"));
  }

  switch (e.kind) {
    case EnvironmentKind::bandit_lower_bound:
    case EnvironmentKind::fullinfo_lower_bound:
    case EnvironmentKind::interval:
      if (e.eps.empty()) {
        throw ConfigError(to_string(e.kind) +
                          " needs environment.eps_list or environment.eps");
      }
      break;
    case EnvironmentKind::octopus:
      if (e.octopus_k == 0 || e.octopus_d == 0) {
        throw ConfigError("octopus needs environment.k and environment.d");
      }
      e.num_arms = e.octopus_k;
      break;
    case EnvironmentKind::smooth_random: {
      e.graph = kv.get_string("environment.graph", "clique");
      if (e.graph.rfind("file:", 0) == 0) {
        e.graph_file = kv.base_dir() / e.graph.substr(5);
      } else if (e.graph == "octopus") {
        if (e.octopus_k == 0 || e.octopus_d == 0) {
          throw ConfigError("octopus graph needs environment.k and "
                            "environment.d");
        }
        e.num_arms = e.octopus_k;
      } else if (e.graph != "clique" && e.graph != "path" &&
                 e.graph != "empty" && e.graph != "random") {
        throw ConfigError("environment.graph must be clique, path, empty, "
                          "octopus, random or file:<path>");
      } else if (e.num_arms == 0) {
        throw ConfigError("environment.graph = " + e.graph +
                          " needs environment.K");
      }
      break;
    }
    case EnvironmentKind::oscillating:
      if (e.num_arms == 0) throw ConfigError("oscillating needs environment.K");
      break;
    case EnvironmentKind::imported:
      e.import_base = kv.base_dir() / kv.get_string("environment.path");
      break;
  }

  LearnerSpec& l = cfg.learner;
  l.kind = parse_learner_kind(kv.get_string("learner.kind"));
  l.inner = parse_learner_kind(kv.get_string("learner.inner", "exp3"));
  l.eta = StepSize::parse(kv.get_string("learner.eta", "doubling"));
  const std::string radius = kv.get_string("learner.radius", "grounded_minor");
  if (radius == "grounded_minor") {
    l.radius = RadiusRule::grounded_minor;
  } else if (radius == "algebraic_connectivity") {
    l.radius = RadiusRule::algebraic_connectivity;
  } else {
    throw ConfigError("learner.radius must be grounded_minor or "
                      "algebraic_connectivity");
  }
  l.singletons_constant = kv.get_bool("learner.singletons_constant", false);

  cfg.horizon = kv.get_size("run.T", 0);
  if (e.kind == EnvironmentKind::imported && !kv.has("run.T")) {
    cfg.horizon = 0;
  } else if (cfg.horizon < 1) {
    throw ConfigError("run.T must be >= 1");
  }
  cfg.seed = kv.get_u64("run.seed", 0);
  cfg.replicas = kv.get_size("run.replicas", 1);
  if (cfg.replicas < 1) throw ConfigError("run.replicas must be >= 1");
  cfg.threads = kv.get_size("run.threads", 0);
  cfg.write_trace = kv.get_bool("run.trace", true);
  cfg.output_dir = kv.get_string("output.dir", "out/" + cfg.name);
  cfg.sweep_group = kv.get_string("sweep.group", cfg.name);
  cfg.sweep_x = kv.get_optional_double("sweep.x");

  check_compatible(cfg);
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  KeyValueConfig kv = KeyValueConfig::load(path);
  if (!kv.has("experiment.name")) {
    kv.set("experiment.name", path.stem().string());
  }
  return parse_experiment(kv);
}

EnvironmentInstance build_environment(const ExperimentConfig& cfg,
                                      std::size_t replica) {
  const EnvironmentSpec& e = cfg.environment;
  if (e.kind == EnvironmentKind::imported) {
    EnvironmentInstance env = import_instance(e.import_base);
    if (cfg.horizon != 0 && cfg.horizon != env.horizon) {
      throw ConfigError("run.T differs from the imported instance's horizon");
    }
    return env;
  }
  Rng rng(cfg.seed + replica, StreamRole::environment);
  try {
    switch (e.kind) {
      case EnvironmentKind::bandit_lower_bound:
        return bandit_lower_bound_env(e.eps, cfg.horizon, rng);
      case EnvironmentKind::fullinfo_lower_bound:
        return fullinfo_lower_bound_env(e.eps, cfg.horizon, rng);
      case EnvironmentKind::interval:
        return interval_env(e.eps, cfg.horizon, e.center_lo, e.center_hi,
                            e.center_mode, rng);
      case EnvironmentKind::octopus:
        return octopus_adversary(e.octopus_k, e.octopus_d, e.budget,
                                 cfg.horizon, rng);
      case EnvironmentKind::smooth_random:
        return smooth_random_env(build_graph(cfg), e.budget, cfg.horizon,
                                 e.anchor_mode, rng);
      case EnvironmentKind::oscillating:
        return oscillating_env(e.num_arms, cfg.horizon, e.delta, rng);
      case EnvironmentKind::imported:
        break;
    }
  } catch (const InvalidInput& err) {
    throw ConfigError(err.what());
  }
  throw ConfigError("unsupported environment");
}

ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t replica) {
  const auto start = std::chrono::steady_clock::now();
  const EnvironmentInstance env = build_environment(cfg, replica);
  check_instance_compatible(cfg, env);
  const std::size_t k = env.num_arms;
  const std::size_t horizon = env.horizon;

  std::optional<ComponentSideInfo> components;
  if (cfg.learner.kind == LearnerKind::multicomponent) {
    try {
      components = ComponentSideInfo::from_graph(
          *env.graph, *env.budget, cfg.learner.radius,
          cfg.learner.singletons_constant);
    } catch (const InvalidInput& err) {
      throw ConfigError(err.what());
    }
  }
  const double eta =
      resolve_eta(cfg, env, components ? &*components : nullptr);

  ReplicaResult result;
  result.replica = replica;
  result.trace = RegretTrace(k);
  result.diagnostics.eta = eta;
  result.diagnostics.clip_events = env.clip_events;

  Rng rng(cfg.seed + replica, StreamRole::learner);
  MeanAccumulator bound;
  MeanAccumulator nominal;
  MeanAccumulator shifted_norm;
  auto anchor_at = [&](std::size_t t) -> std::optional<double> {
    if (!env.has_anchors()) return std::nullopt;
    return env.anchors[t];
  };

  switch (cfg.learner.kind) {
    case LearnerKind::exp3: {
      auto learner = make_bandit_learner(k, cfg.learner.eta, eta);
      for (std::size_t t = 0; t < horizon; ++t) {
        const std::size_t arm = sample(learner->distribution(), rng);
        learner->observe(arm, env.loss(t, arm));
        result.trace.record(arm, env.row(t), anchor_at(t));
      }
      result.diagnostics.restarts = learner->restarts();
      break;
    }
    case LearnerKind::hedge: {
      Hedge learner(k, eta);
      for (std::size_t t = 0; t < horizon; ++t) {
        const std::size_t arm = sample(learner.distribution(), rng);
        learner.observe_full(env.row(t));
        result.trace.record(arm, env.row(t), anchor_at(t));
      }
      break;
    }
    case LearnerKind::reduction: {
      const bool full = cfg.learner.inner == LearnerKind::hedge;
      std::unique_ptr<Learner> inner =
          full ? std::make_unique<Hedge>(k, eta)
               : make_bandit_learner(k, cfg.learner.eta, eta);
      const FeedbackMode mode = full ? FeedbackMode::full : FeedbackMode::bandit;
      for (std::size_t t = 0; t < horizon; ++t) {
        const SideInfo side = env.side_info(t);
        const MetaRound round = meta_round(
            *inner, side, [&](std::size_t i) { return env.loss(t, i); }, mode,
            rng);
        bound.add(full ? full_range_term(side) : bandit_range_term(side));
        result.trace.record(round.played, env.row(t), anchor_at(t));
      }
      result.diagnostics.restarts = inner->restarts();
      break;
    }
    case LearnerKind::anchored_exp3: {
      AnchoredExp3 learner(make_bandit_learner(k, cfg.learner.eta, eta),
                           *env.anchor_mode);
      std::optional<AnchorDiagnostics> diag;
      if (env.graph && env.budget && env.graph->num_nodes() == k &&
          LaplacianView(*env.graph).connected()) {
        diag.emplace(LaplacianView(*env.graph), *env.budget, *env.anchor_mode);
      }
      for (std::size_t t = 0; t < horizon; ++t) {
        const AnchoredRound round = learner.round(
            [&](std::size_t i) { return env.loss(t, i); },
            [&] { return env.anchors[t]; }, rng);
        if (diag) {
          const auto d =
              diag->evaluate(env.row(t), env.anchors[t], env.anchored_arms[t]);
          bound.add(d.exact_bound);
          nominal.add(d.nominal_bound);
          shifted_norm.add(d.shifted_norm_sq);
        } else {
          shifted_norm.add(squared_norm(
              shift_losses(env.row(t), env.anchors[t], *env.anchor_mode)));
        }
        result.trace.record(round.arm, env.row(t), anchor_at(t));
      }
      result.diagnostics.restarts = learner.inner().restarts();
      break;
    }
    case LearnerKind::multicomponent: {
      auto inner = make_bandit_learner(k, cfg.learner.eta, eta);
      for (std::size_t t = 0; t < horizon; ++t) {
        const SideInfo side =
            multicomponent_sideinfo(*components, env.component_anchor_row(t));
        const MetaRound round = meta_round(
            *inner, side, [&](std::size_t i) { return env.loss(t, i); },
            FeedbackMode::bandit, rng);
        bound.add(multicomponent_bound_term(*components, side));
        result.trace.record(round.played, env.row(t), anchor_at(t));
      }
      result.diagnostics.restarts = inner->restarts();
      break;
    }
  }

  result.final_regret = regret(result.trace);
  result.diagnostics.mean_bound = bound.mean();
  result.diagnostics.mean_nominal_bound = nominal.mean();
  result.diagnostics.mean_shifted_norm_sq = shifted_norm.mean();
  if (env.hidden_best) {
    result.diagnostics.regret_vs_hidden =
        result.trace.incurred_loss() -
        result.trace.cumulative_losses()[*env.hidden_best];
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

double RunResult::mean_final_regret() const {
  double acc = 0.0;
  for (const auto& r : replicas) acc += r.final_regret;
  return acc / static_cast<double>(replicas.size());
}

double RunResult::stderr_final_regret() const {
  const std::size_t n = replicas.size();
  if (n < 2) return 0.0;
  const double mean = mean_final_regret();
  double acc = 0.0;
  for (const auto& r : replicas) {
    acc += (r.final_regret - mean) * (r.final_regret - mean);
  }
  return std::sqrt(acc / static_cast<double>(n - 1) / static_cast<double>(n));
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  result.config = cfg;
  result.replicas.resize(cfg.replicas);
  std::vector<std::exception_ptr> errors(cfg.replicas);

  std::size_t workers = cfg.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.replicas);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t r = next++; r < cfg.replicas; r = next++) {
      try {
        result.replicas[r] = run_replica(cfg, r);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return result;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "replica,t,arm,loss,anchor,cum_regret\n";
  for (const auto& rep : result.replicas) {
    const auto& records = rep.trace.records();
    const auto& cum = rep.trace.cumulative_regret();
    for (std::size_t s = 0; s < records.size(); ++s) {
      const RoundRecord& rec = records[s];
      out << rep.replica << ',' << rec.t << ',' << rec.arm << ','
          << format_double(rec.loss) << ',' << format_optional(rec.anchor)
          << ',' << format_double(cum[s]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const RunResult& result) {
  out << "experiment,learner,environment,replica,final_regret,seconds\n";
  const std::string learner = result.config.learner.label();
  const std::string env = to_string(result.config.environment.kind);
  for (const auto& rep : result.replicas) {
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.6f", rep.seconds);
    out << result.config.name << ',' << learner << ',' << env << ','
        << rep.replica << ',' << format_double(rep.final_regret) << ','
        << seconds << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const RunResult& result) {
  out << "replica,restarts,clip_events,eta,mean_bound,mean_nominal_bound,"
         "mean_shifted_norm_sq,regret_vs_hidden\n";
  for (const auto& rep : result.replicas) {
    const ReplicaDiagnostics& d = rep.diagnostics;
    out << rep.replica << ',' << d.restarts << ',' << d.clip_events << ','
        << format_double(d.eta) << ',' << format_optional(d.mean_bound) << ','
        << format_optional(d.mean_nominal_bound) << ','
        << format_optional(d.mean_shifted_norm_sq) << ','
        << format_optional(d.regret_vs_hidden) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidInput("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_outputs(const RunResult& result) {
  const auto& dir = result.config.output_dir;
  if (result.config.write_trace) {
    std::ostringstream trace;
    write_trace_csv(trace, result);
    write_file_atomic(dir / "trace.csv", trace.str());
  }
  std::ostringstream summary;
  write_summary_csv(summary, result);
  write_file_atomic(dir / "summary.csv", summary.str());
  std::ostringstream diag;
  write_diagnostics_csv(diag, result);
  write_file_atomic(dir / "diagnostics.csv", diag.str());
}

ValidationReport validate_experiment(const ExperimentConfig& cfg) {
  ValidationReport report;
  const std::size_t count =
      cfg.environment.kind == EnvironmentKind::imported ? 1 : cfg.replicas;
  for (std::size_t r = 0; r < count; ++r) {
    try {
      const EnvironmentInstance env = build_environment(cfg, r);
      for (auto& failure : validate_environment(env).failures) {
        report.failures.push_back("replica " + std::to_string(r) + ": " +
                                  failure);
      }
    } catch (const ContractViolation& err) {
      report.failures.push_back("replica " + std::to_string(r) + ": " +
                                err.what());
    }
  }
  return report;
}

std::optional<double> lower_bound_scale(const ExperimentConfig& cfg) {
  const EnvironmentSpec& e = cfg.environment;
  const double t = static_cast<double>(cfg.horizon);
  double sum_sq = 0.0;
  double max_sq = 0.0;
  for (double x : e.eps) {
    sum_sq += x * x;
    max_sq = std::max(max_sq, x * x);
  }
  switch (e.kind) {
    case EnvironmentKind::bandit_lower_bound:
    case EnvironmentKind::interval:
      return std::sqrt(t * (cfg.learner.feedback() == FeedbackMode::full
                                ? max_sq
                                : sum_sq));
    case EnvironmentKind::fullinfo_lower_bound:
      return std::sqrt(t * max_sq);
    case EnvironmentKind::octopus: {
      const double lambda2 = algebraic_connectivity(
          LaplacianView(octopus(e.octopus_k, e.octopus_d)));
      return std::min(std::sqrt(static_cast<double>(e.octopus_k)),
                      e.budget / std::sqrt(lambda2)) *
             std::sqrt(t);
    }
    default:
      return std::nullopt;
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidInput("loglog_slope: need at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw InvalidInput("loglog_slope: values must be positive");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidInput("loglog_slope: x values are all equal");
  return sxy / sxx;
}

std::vector<SweepRow> aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw InvalidInput("aggregate: no runs");
  std::vector<SweepRow> rows;
  std::map<std::string, std::vector<std::size_t>> groups;
  for (const RunResult& res : results) {
    SweepRow row;
    row.experiment = res.config.name;
    row.learner = res.config.learner.label();
    row.environment = to_string(res.config.environment.kind);
    row.group = res.config.sweep_group;
    row.x = res.config.sweep_x;
    row.replicas = res.replicas.size();
    row.mean_final_regret = res.mean_final_regret();
    row.stderr_final_regret = res.stderr_final_regret();
    if (const auto scale = lower_bound_scale(res.config);
        scale && *scale > 0.0) {
      row.lower_bound_ratio = row.mean_final_regret / *scale;
    }
    groups[row.group].push_back(rows.size());
    rows.push_back(std::move(row));
  }

  for (const auto& [name, members] : groups) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i : members) {
      if (rows[i].x && *rows[i].x > 0.0 && rows[i].mean_final_regret > 0.0) {
        xs.push_back(*rows[i].x);
        ys.push_back(rows[i].mean_final_regret);
      }
    }
    const bool distinct =
        !xs.empty() && std::any_of(xs.begin(), xs.end(),
                                   [&](double v) { return v != xs.front(); });
    if (xs.size() >= 2 && distinct) {
      const double slope = loglog_slope(xs, ys);
      for (std::size_t i : members) rows[i].loglog_slope = slope;
    }

    std::optional<std::size_t> best;
    for (std::size_t i : members) {
      if (results[i].config.learner.eta.mode != StepSize::Mode::fixed) continue;
      if (!best || rows[i].mean_final_regret < rows[*best].mean_final_regret) {
        best = i;
      }
    }
    if (best) {
      for (std::size_t i : members) {
        if (results[i].config.learner.eta.mode == StepSize::Mode::fixed) {
          rows[i].best_in_group = i == *best;
        }
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "experiment,learner,environment,group,x,replicas,mean_final_regret,"
         "stderr,loglog_slope,best_in_group,lower_bound_ratio\n";
  for (const SweepRow& row : rows) {
    out << row.experiment << ',' << row.learner << ',' << row.environment
        << ',' << row.group << ',' << format_optional(row.x) << ','
        << row.replicas << ',' << format_double(row.mean_final_regret) << ','
        << format_double(row.stderr_final_regret) << ','
        << format_optional(row.loglog_slope) << ','
        << (row.best_in_group ? (*row.best_in_group ? "1" : "0") : "") << ','
        << format_optional(row.lower_bound_ratio) << '\n';
  }
}

}  // namespace rangebandit

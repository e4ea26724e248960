#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rangebandit/anchor.hpp"
#include "rangebandit/config.hpp"
#include "rangebandit/core.hpp"
#include "rangebandit/environments.hpp"

namespace rangebandit {

enum class LearnerKind { exp3, hedge, reduction, anchored_exp3, multicomponent };

std::string to_string(LearnerKind kind);

struct StepSize {
  enum class Mode {
    fixed,
    doubling,  // restart schedule on the observed second moment
    tuned,     // sqrt(log K / sum_t term_t) from the materialized instance
  };
  Mode mode = Mode::doubling;
  double value = 0.0;

  static StepSize parse(const std::string& text);
  std::string label() const;
};

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::bandit_lower_bound;
  std::size_t num_arms = 0;
  std::vector<double> eps;
  double budget = 0.0;
  // clique | path | empty | octopus | random | file:<edge list>
  std::string graph = "clique";
  std::filesystem::path graph_file;
  double edge_prob = 0.3;
  AnchorMode anchor_mode = AnchorMode::any_arm;
  std::optional<double> delta;
  double center_lo = 0.4;
  double center_hi = 0.6;
  CenterMode center_mode = CenterMode::shared;
  std::size_t octopus_k = 0;
  std::size_t octopus_d = 0;
  FeedbackMode feedback = FeedbackMode::bandit;
  std::filesystem::path import_base;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::exp3;
  LearnerKind inner = LearnerKind::exp3;  // reduction only: exp3 or hedge
  StepSize eta;
  RadiusRule radius = RadiusRule::grounded_minor;
  bool singletons_constant = false;

  std::string label() const;
  FeedbackMode feedback() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentSpec environment;
  LearnerSpec learner;
  std::size_t horizon = 1;
  std::uint64_t seed = 0;
  std::size_t replicas = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool write_trace = true;
  std::filesystem::path output_dir = "out";  // relative to the working dir
  std::string sweep_group;
  std::optional<double> sweep_x;
};

/// Reads and checks a flat config; throws ConfigError on unknown keys, bad
/// values and incompatible learner/environment pairs.
ExperimentConfig parse_experiment(const KeyValueConfig& cfg);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Environment of replica `replica`: seed + replica on the environment
/// stream. Imported instances are shared by all replicas.
EnvironmentInstance build_environment(const ExperimentConfig& cfg,
                                      std::size_t replica);

struct ReplicaDiagnostics {
  std::size_t restarts = 0;
  std::size_t clip_events = 0;
  double eta = 0.0;  // 0 under doubling
  std::optional<double> mean_bound;
  std::optional<double> mean_nominal_bound;
  std::optional<double> mean_shifted_norm_sq;
  std::optional<double> regret_vs_hidden;
};

struct ReplicaResult {
  std::size_t replica = 0;
  RegretTrace trace{2};
  double final_regret = 0.0;
  double seconds = 0.0;
  ReplicaDiagnostics diagnostics;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<ReplicaResult> replicas;  // ordered by replica index

  double mean_final_regret() const;
  /// Standard error of the mean; 0 for a single replica.
  double stderr_final_regret() const;
};

/// Runs one replica against its own environment and learner streams.
ReplicaResult run_replica(const ExperimentConfig& cfg, std::size_t replica);

/// Runs every replica, in parallel when threads allow, and merges by index.
RunResult run(const ExperimentConfig& cfg);

void write_trace_csv(std::ostream& out, const RunResult& result);
void write_summary_csv(std::ostream& out, const RunResult& result);
void write_diagnostics_csv(std::ostream& out, const RunResult& result);
/// trace.csv, summary.csv and diagnostics.csv under the output directory,
/// each written to a temporary file and renamed into place.
void write_outputs(const RunResult& result);

/// Builds every replica's environment and collects validator failures.
/// Generator rejections of the parameters surface as ConfigError.
ValidationReport validate_experiment(const ExperimentConfig& cfg);

/// Reference regret scale of the lower-bound environments: sqrt(T sum
/// eps^2) under bandit feedback, sqrt(T max eps^2) under full information,
/// min{sqrt k, C / sqrt(lambda_2)} sqrt(T) for the octopus. Empty for the
/// other environments.
std::optional<double> lower_bound_scale(const ExperimentConfig& cfg);

struct SweepRow {
  std::string experiment;
  std::string learner;
  std::string environment;
  std::string group;
  std::optional<double> x;
  std::size_t replicas = 0;
  double mean_final_regret = 0.0;
  double stderr_final_regret = 0.0;
  std::optional<double> loglog_slope;
  std::optional<bool> best_in_group;
  std::optional<double> lower_bound_ratio;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// One row per run. Within a group the log-log slope of mean regret
/// against x is filled when at least two distinct positive x carry
/// positive means; best_in_group flags the fixed-eta run with the lowest
/// mean.
std::vector<SweepRow> aggregate(const std::vector<RunResult>& results);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace rangebandit

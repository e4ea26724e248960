#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rangebandit/config.hpp"
#include "rangebandit/errors.hpp"
#include "rangebandit/harness.hpp"
#include "rangebandit/instance_io.hpp"

namespace fs = std::filesystem;
using namespace rangebandit;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kConfigError = 2;

int report_validation(const ValidationReport& report, const std::string& what) {
  if (report.ok()) {
    std::cout << what << ": ok\n";
    return kOk;
  }
  for (const auto& failure : report.failures) {
    std::cerr << what << ": " << failure << '\n';
  }
  return kValidationFailure;
}

ExperimentConfig load(const std::string& path, std::size_t threads) {
  ExperimentConfig cfg = load_experiment(path);
  if (threads != 0) cfg.threads = threads;
  return cfg;
}

int cmd_run(const std::string& config, const std::string& output,
            std::size_t threads) {
  ExperimentConfig cfg = load(config, threads);
  if (!output.empty()) cfg.output_dir = output;
  const RunResult result = run(cfg);
  write_outputs(result);
  std::cout << cfg.name << ": " << cfg.replicas << " replicas, mean regret "
            << result.mean_final_regret() << " +/- "
            << result.stderr_final_regret() << " -> "
            << cfg.output_dir.string() << '\n';
  return kOk;
}

int cmd_sweep(const std::string& dir, const std::string& output,
              std::size_t threads) {
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
      configs.push_back(entry.path());
    }
  }
  if (configs.empty()) throw ConfigError("no .cfg files in " + dir);
  std::sort(configs.begin(), configs.end());

  std::vector<ExperimentConfig> parsed;
  for (const auto& path : configs) parsed.push_back(load(path.string(), threads));
  std::vector<RunResult> results;
  for (const auto& cfg : parsed) {
    results.push_back(run(cfg));
    write_outputs(results.back());
    std::cout << cfg.name << ": mean regret "
              << results.back().mean_final_regret() << '\n';
  }
  std::ostringstream out;
  write_sweep_csv(out, aggregate(results));
  const fs::path target = output.empty() ? fs::path(dir) / "sweep.csv" : fs::path(output);
  write_file_atomic(target, out.str());
  std::cout << "sweep -> " << target.string() << '\n';
  return kOk;
}

int cmd_validate(const std::string& config) {
  const ExperimentConfig cfg = load(config, 0);
  return report_validation(validate_experiment(cfg), cfg.name);
}

int cmd_export(const std::string& config, const std::string& out,
               std::size_t replica) {
  const ExperimentConfig cfg = load(config, 0);
  const EnvironmentInstance env = build_environment(cfg, replica);
  export_instance(out, env);
  std::cout << "exported " << to_string(env.kind) << " K=" << env.num_arms
            << " T=" << env.horizon << " -> " << out << ".csv\n";
  return kOk;
}

int cmd_import(const std::string& in, const std::string& out) {
  const EnvironmentInstance env = import_instance(in);
  std::cout << "imported " << to_string(env.kind) << " K=" << env.num_arms
            << " T=" << env.horizon << ": ok\n";
  if (!out.empty()) export_instance(out, env);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range-aware adversarial bandit experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string config_dir;
  std::string output;
  std::string in_base;
  std::size_t threads = 0;
  std::size_t replica = 0;

  auto* run_cmd = app.add_subcommand("run", "Run one experiment config");
  run_cmd->add_option("--config", config, "Config file")->required();
  run_cmd->add_option("--output", output, "Override output.dir");
  run_cmd->add_option("--threads", threads, "Override run.threads");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run every .cfg in a directory and aggregate");
  sweep_cmd->add_option("--config-dir", config_dir, "Config directory")
      ->required();
  sweep_cmd->add_option("--output", output,
                        "Aggregated CSV (default <config-dir>/sweep.csv)");
  sweep_cmd->add_option("--threads", threads, "Override run.threads");

  auto* validate_cmd = app.add_subcommand(
      "validate-env", "Build the config's environments and run the validators");
  validate_cmd->add_option("--config", config, "Config file")->required();

  auto* export_cmd =
      app.add_subcommand("export-env", "Write a replica's instance as CSV");
  export_cmd->add_option("--config", config, "Config file")->required();
  export_cmd->add_option("--out", output, "Output base path")->required();
  export_cmd->add_option("--replica", replica, "Replica index");

  auto* import_cmd =
      app.add_subcommand("import-env", "Load and validate a CSV instance");
  import_cmd->add_option("--in", in_base, "Input base path")->required();
  import_cmd->add_option("--out", output, "Re-export to this base path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(config, output, threads);
    if (*sweep_cmd) return cmd_sweep(config_dir, output, threads);
    if (*validate_cmd) return cmd_validate(config);
    if (*export_cmd) return cmd_export(config, output, replica);
    if (*import_cmd) return cmd_import(in_base, output);
  } catch (const ContractViolation& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

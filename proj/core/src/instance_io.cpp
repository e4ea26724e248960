#include "rangebandit/instance_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rangebandit/errors.hpp"
#include "rangebandit/graph_io.hpp"

namespace rangebandit {

namespace {

using nlohmann::json;

std::filesystem::path with_suffix(const std::filesystem::path& base,
                                  const char* suffix) {
  return std::filesystem::path(base.string() + suffix);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidInput("instance csv: bad field '" + std::string(field) +
                       "' on line " + std::to_string(line_no));
  }
  return value;
}

const char* anchor_mode_name(AnchorMode mode) {
  return mode == AnchorMode::any_arm ? "any_arm" : "min_loss";
}

AnchorMode parse_anchor_mode(const std::string& name) {
  if (name == "any_arm") return AnchorMode::any_arm;
  if (name == "min_loss") return AnchorMode::min_loss;
  throw InvalidInput("unknown anchor mode '" + name + "'");
}

}  // namespace

void write_loss_csv(std::ostream& out, const EnvironmentInstance& env) {
  out << "t,arm,loss\n";
  for (std::size_t t = 0; t < env.horizon; ++t) {
    for (std::size_t i = 0; i < env.num_arms; ++i) {
      out << t + 1 << ',' << i << ',' << format_double(env.loss(t, i)) << '\n';
    }
  }
}

void read_loss_csv(std::istream& in, EnvironmentInstance& env) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("instance csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,arm,loss") {
    throw InvalidInput("instance csv: header must be 't,arm,loss'");
  }
  const std::size_t cells = env.num_arms * env.horizon;
  env.losses.assign(cells, 0.0);
  std::vector<bool> seen(cells, false);
  std::size_t line_no = 1;
  std::size_t filled = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 =
        c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw InvalidInput("instance csv: expected 3 fields on line " +
                         std::to_string(line_no));
    }
    const std::string_view view(line);
    const auto t = parse_field<std::size_t>(view.substr(0, c1), line_no);
    const auto arm =
        parse_field<std::size_t>(view.substr(c1 + 1, c2 - c1 - 1), line_no);
    const auto loss = parse_field<double>(view.substr(c2 + 1), line_no);
    if (t < 1 || t > env.horizon || arm >= env.num_arms) {
      throw InvalidInput("instance csv: (t, arm) out of range on line " +
                         std::to_string(line_no));
    }
    const std::size_t cell = (t - 1) * env.num_arms + arm;
    if (seen[cell]) {
      throw InvalidInput("instance csv: duplicate (t, arm) on line " +
                         std::to_string(line_no));
    }
    seen[cell] = true;
    env.losses[cell] = loss;
    ++filled;
  }
  if (filled != cells) {
    throw InvalidInput("instance csv: expected " + std::to_string(cells) +
                       " rows, found " + std::to_string(filled));
  }
}

void export_instance(const std::filesystem::path& base,
                     const EnvironmentInstance& env) {
  if (base.has_parent_path()) {
    std::filesystem::create_directories(base.parent_path());
  }
  {
    std::ofstream out(with_suffix(base, ".csv"));
    if (!out) throw InvalidInput("cannot write " + base.string() + ".csv");
    write_loss_csv(out, env);
  }

  json meta;
  meta["kind"] = to_string(env.kind);
  meta["num_arms"] = env.num_arms;
  meta["horizon"] = env.horizon;
  meta["seed"] = env.seed;
  meta["loss_file"] = with_suffix(base, ".csv").filename().string();
  meta["hidden_best"] =
      env.hidden_best ? json(*env.hidden_best) : json(nullptr);
  meta["clip_events"] = env.clip_events;
  meta["parameters"] = env.parameters;
  if (env.anchor_mode) meta["anchor_mode"] = anchor_mode_name(*env.anchor_mode);
  if (env.has_anchors()) {
    meta["anchors"] = env.anchors;
    meta["anchored_arms"] = env.anchored_arms;
  }
  if (env.has_side_info()) {
    meta["side_center"] = env.side_center;
    meta["side_radius"] = env.side_radius;
  }
  if (env.graph) {
    const auto graph_path = with_suffix(base, ".graph.txt");
    save_edge_list(graph_path, *env.graph);
    meta["graph"] = graph_path.filename().string();
  }
  if (env.budget) meta["budget"] = *env.budget;
  if (env.has_component_anchors()) {
    meta["component_anchors"] = env.component_anchors;
  }
  if (env.effective_range) meta["effective_range"] = *env.effective_range;

  std::ofstream out(with_suffix(base, ".meta.json"));
  if (!out) throw InvalidInput("cannot write " + base.string() + ".meta.json");
  out << meta.dump(2) << '\n';
}

EnvironmentInstance import_instance(const std::filesystem::path& base) {
  std::ifstream meta_in(with_suffix(base, ".meta.json"));
  if (!meta_in) {
    throw InvalidInput("cannot read " + base.string() + ".meta.json");
  }
  EnvironmentInstance env;
  try {
    const json meta = json::parse(meta_in);
    env.kind = parse_environment_kind(meta.at("kind").get<std::string>());
    env.num_arms = meta.at("num_arms").get<std::size_t>();
    env.horizon = meta.at("horizon").get<std::size_t>();
    env.seed = meta.value("seed", std::uint64_t{0});
    if (meta.contains("hidden_best") && !meta["hidden_best"].is_null()) {
      env.hidden_best = meta["hidden_best"].get<std::size_t>();
    }
    env.clip_events = meta.value("clip_events", std::size_t{0});
    if (meta.contains("parameters")) {
      env.parameters =
          meta["parameters"].get<std::map<std::string, double>>();
    }
    if (meta.contains("anchor_mode")) {
      env.anchor_mode =
          parse_anchor_mode(meta["anchor_mode"].get<std::string>());
    }
    if (meta.contains("anchors")) {
      env.anchors = meta["anchors"].get<std::vector<double>>();
      env.anchored_arms =
          meta.at("anchored_arms").get<std::vector<std::size_t>>();
    }
    if (meta.contains("side_center")) {
      env.side_center = meta["side_center"].get<std::vector<double>>();
      env.side_radius = meta.at("side_radius").get<std::vector<double>>();
    }
    if (meta.contains("graph")) {
      const auto graph_path =
          base.parent_path() / meta["graph"].get<std::string>();
      env.graph = load_edge_list(graph_path);
    }
    if (meta.contains("budget")) env.budget = meta["budget"].get<double>();
    if (meta.contains("component_anchors")) {
      env.component_anchors =
          meta["component_anchors"].get<std::vector<double>>();
    }
    if (meta.contains("effective_range")) {
      env.effective_range = meta["effective_range"].get<double>();
    }
  } catch (const json::exception& e) {
    throw InvalidInput("instance metadata: " + std::string(e.what()));
  }
  if (env.num_arms < 1 || env.horizon < 1 ||
      env.num_arms > kMaxLossEntries / env.horizon) {
    throw InvalidInput("instance metadata: bad K or T");
  }

  std::ifstream csv(with_suffix(base, ".csv"));
  if (!csv) throw InvalidInput("cannot read " + base.string() + ".csv");
  read_loss_csv(csv, env);

  const ValidationReport report = validate_environment(env);
  if (!report.ok()) {
    throw ContractViolation("imported instance failed validation: " +
                            report.failures.front());
  }
  return env;
}

}  // namespace rangebandit

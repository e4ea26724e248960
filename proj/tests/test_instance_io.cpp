#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rangebandit/environments.hpp"
#include "rangebandit/errors.hpp"
#include "rangebandit/instance_io.hpp"
#include "rangebandit/rng.hpp"

using namespace rangebandit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rangebandit_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void expect_same(const EnvironmentInstance& a, const EnvironmentInstance& b) {
  EXPECT_EQ(a.num_arms, b.num_arms);
  EXPECT_EQ(a.horizon, b.horizon);
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.hidden_best, b.hidden_best);
  EXPECT_EQ(a.anchor_mode, b.anchor_mode);
  EXPECT_EQ(a.anchors, b.anchors);
  EXPECT_EQ(a.anchored_arms, b.anchored_arms);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.budget, b.budget);
  EXPECT_EQ(a.component_anchors, b.component_anchors);
  EXPECT_EQ(a.side_center, b.side_center);
  EXPECT_EQ(a.side_radius, b.side_radius);
  EXPECT_EQ(a.effective_range, b.effective_range);
  EXPECT_EQ(a.seed, b.seed);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(InstanceIo, RoundTripsEveryGenerator) {
  Rng rng(1, StreamRole::environment);
  const std::vector<double> eps{0.1, 0.2, 0.15};
  std::vector<EnvironmentInstance> envs;
  envs.push_back(bandit_lower_bound_env(eps, 50, rng));
  envs.push_back(interval_env(eps, 50, 0.3, 0.7, CenterMode::per_arm, rng));
  envs.push_back(octopus_adversary(9, 2, 0.5, 40, rng));
  envs.push_back(smooth_random_env(GraphSpec(5, {{0, 1}, {1, 2}, {3, 4}}), 0.4,
                                   30, AnchorMode::min_loss, rng));
  envs.push_back(oscillating_env(4, 60, std::nullopt, rng));
  for (std::size_t n = 0; n < envs.size(); ++n) {
    const fs::path base = scratch("env" + std::to_string(n));
    export_instance(base, envs[n]);
    const EnvironmentInstance back = import_instance(base);
    expect_same(envs[n], back);
    EXPECT_EQ(back.kind, envs[n].kind);
    export_instance(scratch("again" + std::to_string(n)), back);
    EXPECT_EQ(slurp(fs::path(base.string() + ".csv")),
              slurp(fs::path(scratch("again" + std::to_string(n)).string() +
                             ".csv")));
  }
}

TEST(InstanceIo, CsvHeaderAndOrdering) {
  EnvironmentInstance env;
  env.num_arms = 2;
  env.horizon = 2;
  env.losses = {0.1, 0.2, 0.3, 0.4};
  std::ostringstream out;
  write_loss_csv(out, env);
  EXPECT_EQ(out.str(), "t,arm,loss\n1,0,0.10000000000000001\n"
                       "1,1,0.20000000000000001\n2,0,0.29999999999999999\n"
                       "2,1,0.40000000000000002\n");
}

TEST(InstanceIo, RejectsMalformedCsv) {
  auto read = [](const std::string& text) {
    EnvironmentInstance env;
    env.num_arms = 2;
    env.horizon = 1;
    std::istringstream in(text);
    read_loss_csv(in, env);
    return env;
  };
  EXPECT_NO_THROW(read("t,arm,loss\n1,1,0.5\n1,0,0.25\n"));
  EXPECT_EQ(read("t,arm,loss\r\n1,0,0.5\r\n1,1,1\r\n").losses[1], 1.0);
  EXPECT_THROW(read(""), InvalidInput);
  EXPECT_THROW(read("t,arm,value\n1,0,0.5\n1,1,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1,0,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1,0,0.5\n1,0,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1,0,0.5\n1,2,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n0,0,0.5\n1,1,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1,0,abc\n1,1,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1,0,0.5,7\n1,1,0.5\n"), InvalidInput);
  EXPECT_THROW(read("t,arm,loss\n1;0;0.5\n"), InvalidInput);
}

TEST(InstanceIo, ImportValidatesContents) {
  Rng rng(2, StreamRole::environment);
  const std::vector<double> eps{0.1, 0.1};
  const fs::path base = scratch("tampered");
  export_instance(base, bandit_lower_bound_env(eps, 30, rng));
  const fs::path csv(base.string() + ".csv");
  std::string text = slurp(csv);
  const auto pos = text.find("\n1,0,");
  ASSERT_NE(pos, std::string::npos);
  const auto end = text.find('\n', pos + 1);
  text.replace(pos, end - pos, "\n1,0,0.95");
  std::ofstream(csv) << text;
  EXPECT_THROW(import_instance(base), ContractViolation);
  EXPECT_THROW(import_instance(scratch("missing")), InvalidInput);
}

TEST(InstanceIo, RejectsBrokenMetadata) {
  Rng rng(3, StreamRole::environment);
  const std::vector<double> eps{0.1, 0.1};
  const fs::path base = scratch("badmeta");
  export_instance(base, bandit_lower_bound_env(eps, 10, rng));
  std::ofstream(fs::path(base.string() + ".meta.json")) << "{ not json";
  EXPECT_THROW(import_instance(base), InvalidInput);
}

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "rangebandit/config.hpp"

using namespace rangebandit;

namespace {

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in, "test.cfg");
}

}  // namespace

TEST(KeyValueConfig, ParsesCommentsAndWhitespace) {
  const auto cfg = parse(
      "# header\n"
      "\n"
      "  a.b = 1.5   # trailing\n"
      "name=hello world\n"
      "list = 0.1, 0.2 ,0.3\n"
      "flag = true\n");
  EXPECT_EQ(cfg.get_double("a.b"), 1.5);
  EXPECT_EQ(cfg.get_string("name"), "hello world");
  EXPECT_EQ(cfg.get_doubles("list"), (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_TRUE(cfg.get_bool("flag", false));
  EXPECT_FALSE(cfg.get_bool("absent", false));
  EXPECT_EQ(cfg.get_string("absent", "x"), "x");
  EXPECT_EQ(cfg.get_size("absent", 7), 7u);
  EXPECT_FALSE(cfg.get_optional_double("absent").has_value());
  EXPECT_EQ(cfg.values().size(), 4u);
}

TEST(KeyValueConfig, RejectsMalformedLines) {
  EXPECT_THROW(parse("just a word\n"), ConfigError);
  EXPECT_THROW(parse("= 3\n"), ConfigError);
  try {
    parse("a = 1\nb = 2\na = 3\n");
    FAIL() << "duplicate accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:3"), std::string::npos);
  }
}

TEST(KeyValueConfig, TypedGettersNameTheKey) {
  const auto cfg = parse("x = abc\nn = -3\nf = 2.5\nb = maybe\nl = 1,,2\n");
  try {
    cfg.get_double("x");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
  EXPECT_THROW(cfg.get_size("n"), ConfigError);
  EXPECT_THROW(cfg.get_size("f"), ConfigError);
  EXPECT_THROW(cfg.get_bool("b", false), ConfigError);
  EXPECT_THROW(cfg.get_doubles("l"), ConfigError);
  EXPECT_THROW(cfg.get_string("missing"), ConfigError);
  EXPECT_EQ(cfg.get_double("n"), -3.0);
}

TEST(KeyValueConfig, RejectsUnknownKeys) {
  const auto cfg = parse("a = 1\nb = 2\n");
  EXPECT_NO_THROW(cfg.reject_unknown({"a", "b", "c"}));
  EXPECT_THROW(cfg.reject_unknown({"a"}), ConfigError);
}

TEST(KeyValueConfig, LoadReportsMissingFile) {
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/x.cfg"), ConfigError);
}

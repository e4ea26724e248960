#include "rangebandit/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string_view>

namespace rangebandit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in,
                                     const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string value(trim(view.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": empty key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  KeyValueConfig cfg = parse(in, path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(source_ + ": missing required key '" + key + "'");
  }
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const auto value = parse_number<double>(get_string(key));
  if (!value) {
    throw ConfigError(source_ + ": key '" + key + "' must be a number");
  }
  return *value;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::optional<double> KeyValueConfig::get_optional_double(
    const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::size_t KeyValueConfig::get_size(const std::string& key) const {
  const auto value = parse_number<std::size_t>(get_string(key));
  if (!value) {
    throw ConfigError(source_ + ": key '" + key +
                      "' must be a nonnegative integer");
  }
  return *value;
}

std::size_t KeyValueConfig::get_size(const std::string& key,
                                     std::size_t fallback) const {
  return has(key) ? get_size(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto value = parse_number<std::uint64_t>(get_string(key));
  if (!value) {
    throw ConfigError(source_ + ": key '" + key +
                      "' must be a nonnegative integer");
  }
  return *value;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string value = get_string(key);
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(source_ + ": key '" + key + "' must be true or false");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  const std::string text = get_string(key);
  std::vector<double> out;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const auto value = parse_number<double>(rest.substr(0, comma));
    if (!value) {
      throw ConfigError(source_ + ": key '" + key +
                        "' must be a comma-separated list of numbers");
    }
    out.push_back(*value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      throw ConfigError(source_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace rangebandit

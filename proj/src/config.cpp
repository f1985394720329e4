#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "gridsmooth/experiment.hpp"

namespace gridsmooth {
namespace {

std::string trim(const std::string& s) {
  const auto first = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  const auto last = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
  return first < last ? std::string(first, last) : std::string();
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const std::string clean = trim(text);
  const auto [ptr, ec] = std::from_chars(clean.data(), clean.data() + clean.size(), value);
  if (ec != std::errc() || ptr != clean.data() + clean.size() || clean.empty())
    throw ConfigError("invalid value '" + text + "' for key '" + key + "'");
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean '" + text + "' for key '" + key + "'");
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

ExperimentConfig config_from_key_values(const KeyValues& values) {
  if (!values.count("sigma")) throw ConfigError("sigma must be given; there is no default noise level");
  ExperimentConfig config;
  for (const auto& [key, value] : values) {
    if (key == "family") {
      try {
        config.family = parse_signal_family(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "d") {
      config.d = parse_number<std::size_t>(key, value);
    } else if (key == "side_lengths") {
      config.side_lengths.clear();
      for (const std::string& item : split_list(value)) config.side_lengths.push_back(parse_number<std::size_t>(key, item));
    } else if (key == "sigma") {
      config.sigma = parse_number<double>(key, value);
    } else if (key == "replicates") {
      config.replicates = parse_number<std::size_t>(key, value);
    } else if (key == "estimators") {
      config.estimators.clear();
      for (const std::string& item : split_list(value)) {
        try {
          config.estimators.push_back(parse_family(item));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
    } else if (key == "tuning_points") {
      config.tuning_points = parse_number<std::size_t>(key, value);
    } else if (key == "tuning_span") {
      config.tuning_span = parse_number<double>(key, value);
    } else if (key == "base_seed") {
      config.base_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "radius") {
      if (!trim(value).empty()) config.radius = parse_number<double>(key, value);
    } else if (key == "gap_tol") {
      config.gap_tol = parse_number<double>(key, value);
    } else if (key == "max_iter") {
      config.max_iter = parse_number<std::size_t>(key, value);
    } else if (key == "threads") {
      config.threads = parse_number<std::size_t>(key, value);
    } else if (key == "timing" || key == "record_timing") {
      config.record_timing = parse_bool(key, value);
    } else if (key == "output") {
      config.output = value;
    } else if (key == "summary" || key == "summary_output") {
      config.summary_output = value;
    } else if (key == "strict") {
      parse_bool(key, value);  // consumed by the CLI
    } else {
      throw ConfigError("unknown configuration key '" + key + "'");
    }
  }
  return config;
}

}  // namespace gridsmooth

#include "mpg/cli/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpg::cli {

namespace {

std::string trim(const std::string& s) {
  size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& origin) {
  Config config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (config.entries_.count(key) != 0U) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    config.entries_[key] = Entry{value, line_no};
  }
  return config;
}

void Config::set_override(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, 0};
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0U;
}

std::string Config::describe(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end() || it->second.line == 0) {
    return "field '" + key + "'";
  }
  return origin_ + ":" + std::to_string(it->second.line) + ": field '" + key + "'";
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  consumed_.insert(key);
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

long Config::get_long(const std::string& key, long fallback, long min_value,
                      long max_value) {
  consumed_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  long parsed = 0;
  try {
    size_t used = 0;
    parsed = std::stol(it->second.value, &used);
    if (used != it->second.value.size()) throw std::invalid_argument("trail");
  } catch (const std::exception&) {
    throw ConfigError(describe(key) + ": expected an integer, got '" +
                      it->second.value + "'");
  }
  if (parsed < min_value || parsed > max_value) {
    throw ConfigError(describe(key) + ": value " + it->second.value +
                      " outside [" + std::to_string(min_value) + ", " +
                      std::to_string(max_value) + "]");
  }
  return parsed;
}

double Config::get_double(const std::string& key, double fallback,
                          double min_value, double max_value) {
  consumed_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double parsed = 0.0;
  try {
    size_t used = 0;
    parsed = std::stod(it->second.value, &used);
    if (used != it->second.value.size()) throw std::invalid_argument("trail");
  } catch (const std::exception&) {
    throw ConfigError(describe(key) + ": expected a number, got '" +
                      it->second.value + "'");
  }
  if (!(parsed >= min_value && parsed <= max_value)) {
    throw ConfigError(describe(key) + ": value outside [" +
                      std::to_string(min_value) + ", " +
                      std::to_string(max_value) + "]");
  }
  return parsed;
}

uint64_t Config::get_seed(const std::string& key, uint64_t fallback) {
  consumed_.insert(key);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    size_t used = 0;
    const uint64_t parsed = std::stoull(it->second.value, &used);
    if (used != it->second.value.size()) throw std::invalid_argument("trail");
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError(describe(key) + ": expected a nonnegative integer seed");
  }
}

void Config::reject_unknown_keys() const {
  for (const auto& [key, entry] : entries_) {
    if (consumed_.count(key) == 0U) {
      throw ConfigError(describe(key) + ": unknown key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> Config::snapshot() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : entries_) out[key] = entry.value;
  return out;
}

}  // namespace mpg::cli

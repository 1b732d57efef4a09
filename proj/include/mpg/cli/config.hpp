#pragma once

#include <cstdint>
#include <stdexcept>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mpg::cli {

/// Raised on malformed or invalid configuration; the message carries a
/// file:line/field diagnostic and the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key = value configuration text. '#' starts a comment; blank lines
/// are skipped. Keys must be unique. Typed getters validate on access and
/// record which keys were consumed so unknown keys can be rejected.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& origin);

  /// Command-line overrides, highest precedence.
  void set_override(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  long get_long(const std::string& key, long fallback, long min_value,
                long max_value);
  double get_double(const std::string& key, double fallback, double min_value,
                    double max_value);
  uint64_t get_seed(const std::string& key, uint64_t fallback);

  /// Throws ConfigError naming the first key that no getter consumed.
  void reject_unknown_keys() const;

  /// Everything as resolved strings, for run manifests.
  std::map<std::string, std::string> snapshot() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string describe(const std::string& key) const;

  std::string origin_ = "<empty>";
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> consumed_;
};

}  // namespace mpg::cli

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mpg::cli {

inline constexpr const char* kCodeVersion = "mpg 0.1.0";

/// Provenance record written next to every batch of outputs: the resolved
/// configuration, the seeds used and the files produced, so each artifact
/// can be regenerated from its manifest alone. Timestamps live only here,
/// never in the data files.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<uint64_t> seeds;
  std::vector<std::string> outputs;
  std::string created_utc;

  static std::string now_utc();
  void write(const std::string& path) const;
};

}  // namespace mpg::cli

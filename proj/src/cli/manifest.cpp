#include "mpg/cli/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mpg::cli {

std::string RunManifest::now_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json doc;
  doc["code_version"] = kCodeVersion;
  doc["command"] = command;
  doc["config"] = config;
  doc["seeds"] = seeds;
  doc["outputs"] = outputs;
  doc["created_utc"] = created_utc;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("manifest: cannot open " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace mpg::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpg::cli {

// exit codes: 0 ok, 1 check failure, 2 usage/config error
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config_path;  // empty = shipped defaults
  std::string out_dir;      // empty = $MPG_OUT_DIR, else "."
  std::optional<uint64_t> seed;
  std::optional<std::string> estimator;
  std::optional<long> runs;
  std::optional<long> episodes;
  std::string checkpoint;
};

/// Trains n_runs per requested estimator on the navigation task, writing a
/// per-episode CSV and checkpoint per run, a summary CSV and a manifest.
int cmd_train(const CommonFlags& flags);

/// Emits a coupled variance report (JSON) for the init-model or
/// trained-model protocol.
int cmd_variance(const CommonFlags& flags);

/// Runs the named oracle suites (all when empty) and prints a pass/fail
/// table.
int cmd_check(const std::vector<std::string>& suites);

/// Prints the recursion-vs-quadrature table as CSV.
int cmd_mcheck();

}  // namespace mpg::cli

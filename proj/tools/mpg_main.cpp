#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mpg/cli/commands.hpp"
#include "mpg/cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"marginal policy gradient experiments"};
  app.require_subcommand(1);

  mpg::cli::CommonFlags flags;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "configuration file (key = value lines)");
    cmd->add_option("--out", flags.out_dir, "output directory (default $MPG_OUT_DIR or .)");
    cmd->add_option("--seed", flags.seed, "base seed");
    cmd->add_option("--estimator", flags.estimator, "estimator name");
    cmd->add_option("--checkpoint", flags.checkpoint, "checkpoint path");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "train on the navigation task");
  add_common(train_cmd);
  train_cmd->add_option("--runs", flags.runs, "runs per estimator");
  train_cmd->add_option("--episodes", flags.episodes, "episodes per run");

  CLI::App* variance_cmd =
      app.add_subcommand("variance", "coupled estimator variance report");
  add_common(variance_cmd);

  std::vector<std::string> suites;
  CLI::App* check_cmd = app.add_subcommand("check", "run oracle check suites");
  check_cmd->add_option("suites", suites,
                        "subset of {mfun, grads, normalization, polar, capg}");

  CLI::App* mcheck_cmd =
      app.add_subcommand("mcheck", "recursion vs quadrature table (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11's help path returns 0; anything else is a usage error
    return code == 0 ? mpg::cli::kExitOk : mpg::cli::kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return mpg::cli::cmd_train(flags);
    if (variance_cmd->parsed()) return mpg::cli::cmd_variance(flags);
    if (check_cmd->parsed()) return mpg::cli::cmd_check(suites);
    if (mcheck_cmd->parsed()) return mpg::cli::cmd_mcheck();
  } catch (const mpg::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return mpg::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return mpg::cli::kExitCheckFailure;
  }
  return mpg::cli::kExitUsage;
}

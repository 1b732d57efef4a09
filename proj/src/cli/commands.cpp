#include "mpg/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "mpg/cli/checks.hpp"
#include "mpg/cli/config.hpp"
#include "mpg/cli/manifest.hpp"
#include "mpg/env/platform2d.hpp"
#include "mpg/est/variance.hpp"
#include "mpg/math/mfun.hpp"
#include "mpg/train/checkpoint.hpp"
#include "mpg/train/trainer.hpp"

namespace mpg::cli {

namespace {

namespace fs = std::filesystem;

std::string resolve_out_dir(const CommonFlags& flags) {
  if (!flags.out_dir.empty()) return flags.out_dir;
  const char* from_env = std::getenv("MPG_OUT_DIR");
  if (from_env != nullptr && from_env[0] != '\0') return from_env;
  return ".";
}

Config load_config(const CommonFlags& flags) {
  Config config = flags.config_path.empty()
                      ? Config()
                      : Config::parse_file(flags.config_path);
  if (flags.seed) config.set_override("seed", std::to_string(*flags.seed));
  if (flags.estimator) config.set_override("estimator", *flags.estimator);
  if (flags.runs) config.set_override("runs", std::to_string(*flags.runs));
  if (flags.episodes) {
    config.set_override("episodes", std::to_string(*flags.episodes));
  }
  if (!flags.checkpoint.empty()) {
    config.set_override("checkpoint", flags.checkpoint);
  }
  return config;
}

// shared training keys; Appendix-style defaults are the shipped values
struct TrainKeys {
  train::TrainConfig cfg;
  env::Platform2D::Options env_options;
  long runs = 1;
  std::vector<train::EstimatorKind> estimators;
};

nn::Activation parse_activation_key(Config& config) {
  const std::string name = config.get_string("activation", "tanh");
  if (name == "tanh") return nn::Activation::kTanh;
  if (name == "selu") return nn::Activation::kSelu;
  if (name == "identity") return nn::Activation::kIdentity;
  throw ConfigError("field 'activation': unknown activation '" + name + "'");
}

TrainKeys read_train_keys(Config& config) {
  TrainKeys keys;
  keys.cfg.workers = static_cast<int>(config.get_long("workers", 4, 1, 64));
  keys.cfg.lr_actor = config.get_double("lr_actor", 0.01, 1e-8, 10.0);
  keys.cfg.lr_critic = config.get_double("lr_critic", 0.01, 1e-8, 10.0);
  keys.cfg.gamma = config.get_double("gamma", 0.99, 1e-6, 0.999999);
  keys.cfg.sigma = config.get_double("sigma", 0.1, 1e-4, 10.0);
  keys.cfg.episodes = config.get_long("episodes", 20000, 0, 100000000);
  keys.cfg.seed = config.get_seed("seed", 1);
  keys.cfg.rollout_len = static_cast<int>(config.get_long("rollout_len", 20, 1, 100000));
  keys.cfg.hidden_layers = static_cast<int>(config.get_long("hidden_layers", 2, 0, 16));
  keys.cfg.hidden_width = static_cast<int>(config.get_long("hidden_width", 32, 1, 4096));
  keys.cfg.activation = parse_activation_key(config);
  keys.env_options.step_size = config.get_double("delta", 0.1, 1e-6, 10.0);
  keys.env_options.goal_radius = config.get_double("goal_radius", 0.1, 1e-6, 10.0);
  keys.env_options.max_steps = static_cast<int>(config.get_long("max_steps", 200, 1, 1000000));
  keys.runs = config.get_long("runs", 1, 1, 10000);

  const std::string estimator = config.get_string("estimator", "all");
  if (estimator == "all") {
    keys.estimators = {train::EstimatorKind::kAngular,
                       train::EstimatorKind::kStandard,
                       train::EstimatorKind::kWrappedAngle};
  } else {
    const auto kind = train::parse_estimator(estimator);
    if (!kind) {
      throw ConfigError("field 'estimator': unknown estimator '" + estimator +
                        "'");
    }
    keys.estimators = {*kind};
  }
  return keys;
}

struct RunSummary {
  std::string run_id;
  std::string estimator;
  uint64_t seed = 0;
  long episodes = 0;
  double final100 = 0.0;
  long episodes_to_90 = -1;
  long episodes_to_95 = -1;
};

double rolling_100_mean(std::span<const train::EpisodeRecord> episodes) {
  if (episodes.size() < 100) return std::nan("");
  double total = 0.0;
  for (size_t i = episodes.size() - 100; i < episodes.size(); ++i) {
    total += episodes[i].discounted_return;
  }
  return total / 100.0;
}

}  // namespace

int cmd_train(const CommonFlags& flags) {
  Config config = load_config(flags);
  TrainKeys keys = read_train_keys(config);
  config.reject_unknown_keys();

  const std::string out_dir = resolve_out_dir(flags);
  fs::create_directories(out_dir);

  const double optimum = env::Platform2D::optimal_discounted_return(
      keys.env_options, keys.cfg.gamma);

  RunManifest manifest;
  manifest.command = "train";
  manifest.config = config.snapshot();
  manifest.created_utc = RunManifest::now_utc();

  std::vector<RunSummary> summaries;
  for (const train::EstimatorKind kind : keys.estimators) {
    for (long run = 0; run < keys.runs; ++run) {
      train::TrainConfig cfg = keys.cfg;
      cfg.estimator = kind;
      cfg.seed = keys.cfg.seed + static_cast<uint64_t>(run);

      RunSummary summary;
      summary.estimator = train::estimator_name(kind);
      summary.seed = cfg.seed;
      summary.run_id = summary.estimator + "_seed" + std::to_string(cfg.seed);

      cfg.stop_condition = [&](std::span<const train::EpisodeRecord> eps) {
        const double rolling = rolling_100_mean(eps);
        if (summary.episodes_to_90 < 0 && rolling >= 0.90 * optimum) {
          summary.episodes_to_90 = static_cast<long>(eps.size());
        }
        if (summary.episodes_to_95 < 0 && rolling >= 0.95 * optimum) {
          summary.episodes_to_95 = static_cast<long>(eps.size());
        }
        return false;  // always run the configured episode budget
      };

      const env::Platform2D::Options env_options = keys.env_options;
      const train::TrainResult result = train::run_training(
          cfg, [env_options] { return std::make_unique<env::Platform2D>(env_options); });

      summary.episodes = static_cast<long>(result.episodes.size());
      summary.final100 = rolling_100_mean(result.episodes);
      summaries.push_back(summary);

      const std::string csv_path = out_dir + "/" + summary.run_id + ".csv";
      train::write_episode_csv(csv_path, summary.run_id, result.episodes);
      manifest.outputs.push_back(csv_path);
      manifest.seeds.push_back(cfg.seed);

      // persist the nets for the trained-model variance protocol
      if (kind == train::EstimatorKind::kAngular ||
          kind == train::EstimatorKind::kStandard) {
        const auto* dir = dynamic_cast<const train::DirectionalGaussianPolicy*>(
            result.actor.get());
        if (dir != nullptr) {
          train::Checkpoint ck;
          ck.estimator = kind;
          ck.sigma = cfg.sigma;
          ck.actor_spec = dir->spec();
          ck.actor_params = dir->params();
          ck.critic_spec = result.critic.spec;
          ck.critic_params = result.critic.params;
          const std::string ck_path = out_dir + "/" + summary.run_id + ".ckpt";
          train::save_checkpoint(ck_path, ck);
          manifest.outputs.push_back(ck_path);
        }
      }
      std::fprintf(stderr, "run %s: episodes=%ld final100=%.4g\n",
                   summary.run_id.c_str(), summary.episodes, summary.final100);
    }
  }

  const std::string summary_path = out_dir + "/summary.csv";
  {
    std::ofstream out(summary_path);
    out << "run_id,estimator,seed,episodes,final100_mean,episodes_to_90pct,"
           "episodes_to_95pct,optimum\n";
    char buf[64];
    for (const RunSummary& s : summaries) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.final100);
      out << s.run_id << ',' << s.estimator << ',' << s.seed << ','
          << s.episodes << ',' << buf << ',' << s.episodes_to_90 << ','
          << s.episodes_to_95 << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", optimum);
      out << buf << '\n';
    }
  }
  manifest.outputs.push_back(summary_path);
  manifest.write(out_dir + "/manifest.json");
  return kExitOk;
}

int cmd_variance(const CommonFlags& flags) {
  Config config = load_config(flags);

  const std::string protocol = config.get_string("protocol", "init");
  if (protocol != "init" && protocol != "trained") {
    throw ConfigError("field 'protocol': must be 'init' or 'trained'");
  }
  const std::string q_mode = config.get_string("q_mode", "nstep");
  if (q_mode != "nstep" && q_mode != "critic") {
    throw ConfigError("field 'q_mode': must be 'nstep' or 'critic'");
  }
  const std::string estimator = config.get_string("estimator", "angular");
  const long n = config.get_long("n", 100000, 1000, 100000000);
  const long n_states = config.get_long("n_states", 200, 1, 1000000);
  const std::string checkpoint_path = config.get_string("checkpoint", "");

  if (estimator != "angular" && estimator != "clipped") {
    throw ConfigError("field 'estimator': variance supports 'angular' or 'clipped'");
  }
  // reuse the training keys for nets and environment shape; the copy keeps
  // the already-consumed marks so unknown keys are still caught
  Config net_keys = config;
  net_keys.set_override("estimator", "angular");
  TrainKeys keys = read_train_keys(net_keys);
  net_keys.reject_unknown_keys();

  const std::string out_dir = resolve_out_dir(flags);
  fs::create_directories(out_dir);

  est::VarianceReport report;
  RandomStream rng(keys.cfg.seed, 0x7a71);

  if (estimator == "angular") {
    train::TrainConfig cfg = keys.cfg;
    cfg.estimator = train::EstimatorKind::kAngular;
    std::unique_ptr<train::Policy> actor;
    train::Critic critic;
    if (protocol == "trained") {
      if (checkpoint_path.empty()) {
        throw ConfigError("field 'checkpoint': required for the trained protocol");
      }
      const train::Checkpoint ck = train::load_checkpoint(checkpoint_path);
      auto policy = std::make_unique<train::DirectionalGaussianPolicy>(
          ck.actor_spec, ck.sigma);
      policy->params() = ck.actor_params;
      actor = std::move(policy);
      critic.spec = ck.critic_spec;
      critic.params = ck.critic_params;
    } else {
      actor = train::make_policy(cfg, 2, 2);
      critic = train::make_critic(cfg, 2);
    }

    const env::Platform2D::Options env_options = keys.env_options;
    const train::EnvFactory factory = [env_options] {
      return std::make_unique<env::Platform2D>(env_options);
    };
    if (q_mode == "nstep") {
      est::RolloutVarianceOptions options;
      options.gamma = keys.cfg.gamma;
      options.rollout_len = keys.cfg.rollout_len;
      options.n = n;
      report = est::measure_rollout_variance(*actor, critic, factory, options,
                                             rng);
    } else {
      // fixed on-policy states, one-step critic advantage as q
      std::vector<std::vector<double>> states;
      {
        env::Platform2D environment(env_options);
        std::vector<double> obs = environment.reset(0);
        RandomStream walker(keys.cfg.seed, 0x57a7);
        while (static_cast<long>(states.size()) < n_states) {
          states.push_back(obs);
          const train::PolicyDraw draw = actor->act(obs, walker);
          const env::StepResult sr = environment.step(draw.env_action);
          obs = sr.done() ? environment.reset(0) : sr.next_state;
        }
      }
      const double gamma = keys.cfg.gamma;
      const est::QFunction q = [&critic, env_options, gamma](
                                   std::span<const double> s,
                                   std::span<const double> b) {
        const std::vector<double> next{s[0] + env_options.step_size * b[0],
                                       s[1] + env_options.step_size * b[1]};
        const double reward =
            env::Platform2D::potential(s) - env::Platform2D::potential(next);
        const bool goal =
            env::Platform2D::potential(next) <= env_options.goal_radius;
        const bool off = std::fabs(next[0]) > 1.5 || std::fabs(next[1]) > 1.5;
        const double v_next = (goal || off) ? 0.0 : critic.value(next);
        return reward + gamma * v_next - critic.value(s);
      };
      report = est::measure_variance(*actor, states, q,
                                     train::EstimatorKind::kAngular, n, rng);
    }
  } else if (estimator == "clipped") {
    if (protocol == "trained") {
      throw ConfigError("field 'protocol': the clipped bandit has no trained protocol");
    }
    train::ClippedScalarPolicy policy(0.8, 0.6, dist::ClipInterval(-1.0, 1.0));
    const std::vector<std::vector<double>> states{{0.0}};
    const est::QFunction q = [](std::span<const double>,
                                std::span<const double> b) {
      return 1.0 - (b[0] - 0.25) * (b[0] - 0.25);
    };
    report = est::measure_variance(policy, states, q,
                                   train::EstimatorKind::kClipped, n, rng);
  } else {
    throw ConfigError("field 'estimator': variance supports 'angular' or 'clipped'");
  }

  nlohmann::json doc;
  doc["var_standard"] = report.var_standard;
  doc["var_marginal"] = report.var_marginal;
  doc["gap"] = report.gap;
  doc["stderr"] = report.mc_stderr_gap;
  doc["n"] = report.n_samples;
  doc["estimator"] = estimator;
  doc["seed"] = keys.cfg.seed;
  doc["protocol"] = protocol;
  doc["q_mode"] = estimator == "clipped" ? "critic" : q_mode;
  doc["ratio"] = report.var_marginal / report.var_standard;
  doc["mean_sq_diff"] = report.mean_sq_diff;
  doc["gap_identity_residual"] = report.gap_identity_residual;
  doc["gap_identity_stderr"] = report.gap_identity_stderr;
  doc["code_version"] = kCodeVersion;

  const std::string json_path =
      out_dir + "/variance_" + estimator + "_" + protocol + ".json";
  {
    std::ofstream out(json_path);
    out << doc.dump(2) << '\n';
  }
  std::cout << doc.dump(2) << std::endl;

  RunManifest manifest;
  manifest.command = "variance";
  manifest.config = config.snapshot();
  manifest.seeds = {keys.cfg.seed};
  manifest.outputs = {json_path};
  manifest.created_utc = RunManifest::now_utc();
  manifest.write(out_dir + "/manifest.json");
  return kExitOk;
}

int cmd_check(const std::vector<std::string>& suites) {
  const std::vector<std::string> all{"mfun", "grads", "normalization", "polar",
                                     "capg"};
  const std::vector<CheckSuiteResult> results =
      run_check_suites(suites.empty() ? all : suites);
  bool pass = true;
  std::printf("%-14s %-36s %12s %12s  %s\n", "suite", "check", "observed",
              "threshold", "status");
  for (const CheckSuiteResult& suite : results) {
    for (const CheckRow& row : suite.rows) {
      std::printf("%-14s %-36s %12.4g %12.4g  %s\n", suite.suite.c_str(),
                  row.name.c_str(), row.observed, row.threshold,
                  row.pass ? "PASS" : "FAIL");
    }
    pass = pass && suite.pass;
  }
  return pass ? kExitOk : kExitCheckFailure;
}

int cmd_mcheck() {
  std::printf("d,alpha,recursion,quadrature,rel_err\n");
  for (int d = 0; d <= 10; ++d) {
    for (int i = 0; i <= 20; ++i) {
      const double alpha = -5.0 + 0.5 * i;
      const double rec = math::m_function(d, alpha);
      const double quad = math::m_function_quadrature(d, alpha, 1e-10);
      std::printf("%d,%.1f,%.17g,%.17g,%.3g\n", d, alpha, rec, quad,
                  std::fabs(rec - quad) / quad);
    }
  }
  return kExitOk;
}

}  // namespace mpg::cli

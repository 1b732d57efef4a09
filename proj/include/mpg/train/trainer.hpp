#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mpg/env/environment.hpp"
#include "mpg/nn/mlp.hpp"
#include "mpg/train/policy.hpp"

namespace mpg::train {

struct EpisodeRecord {
  long episode_index = 0;
  uint64_t seed = 0;
  int steps = 0;
  double discounted_return = 0.0;
  env::Terminal outcome = env::Terminal::kNone;
};

struct TrainConfig {
  int workers = 4;
  double lr_actor = 0.01;
  double lr_critic = 0.01;
  double gamma = 0.99;
  double sigma = 0.1;
  EstimatorKind estimator = EstimatorKind::kAngular;
  long episodes = 20000;
  uint64_t seed = 0;
  int rollout_len = 20;

  // function approximators (policy and value nets share the shape)
  int hidden_layers = 2;
  int hidden_width = 32;
  nn::Activation activation = nn::Activation::kTanh;

  // parametrized-action heads (toy environment only)
  double sigma_move = 0.3;
  double sigma_thrust = 0.4;

  // optional early-stop hook, checked after each synchronous update;
  // not part of the persisted configuration
  std::function<bool(std::span<const EpisodeRecord>)> stop_condition;
};

/// State-value network.
struct Critic {
  nn::MlpSpec spec;
  nn::FlatParams params;

  double value(std::span<const double> state) const;
};

/// Aggregated on-policy batch, transitions kept in worker-index order.
struct Batch {
  std::vector<std::vector<double>> states;
  std::vector<PolicyDraw> draws;
  std::vector<double> returns;  // n-step targets R_t
};

struct UpdateStats {
  int batch_size = 0;
  double mean_advantage = 0.0;
  double critic_mse = 0.0;
};

using EnvFactory = std::function<std::unique_ptr<env::Environment>()>;

struct TrainResult {
  std::vector<EpisodeRecord> episodes;
  std::unique_ptr<Policy> actor;
  Critic critic;
};

/// One environment transition as collected on-policy.
struct RolloutStep {
  std::vector<double> state;
  PolicyDraw draw;
  double reward = 0.0;
  env::Terminal terminal = env::Terminal::kNone;
  std::vector<double> next_state;
};

/// n-step on-policy segment. `obs` carries the current observation across
/// calls and is advanced in place; finished episodes reset the environment
/// and continue within the same segment.
std::vector<RolloutStep> collect_rollout(const Policy& policy,
                                         env::Environment& environment,
                                         std::vector<double>& obs,
                                         int rollout_len, RandomStream& rng);

/// Backward recursion R_t = r_t + gamma * R_{t+1}, reset at hard terminals;
/// the open tail bootstraps with `tail_bootstrap`. Truncated episodes are
/// handled by the caller folding gamma*v(next) into that step's reward and
/// marking it terminal.
std::vector<double> compute_returns(std::span<const double> rewards,
                                    std::span<const uint8_t> terminal,
                                    double gamma, double tail_bootstrap);

/// Builds the policy family the estimator kind calls for.
std::unique_ptr<Policy> make_policy(const TrainConfig& cfg, int state_dim,
                                    int action_param_dim);

/// Fresh value network with the config's shape and a seed derived from
/// cfg.seed; the same construction run_training uses.
Critic make_critic(const TrainConfig& cfg, int state_dim);

/// One synchronous update: the actor ascends the mean q-scaled score with
/// q = R - v(s) (critic held fixed), the critic descends the squared error.
UpdateStats a2c_update(Policy& actor, Critic& critic, const Batch& batch,
                       const TrainConfig& cfg);

/// Full training run. Deterministic for a fixed config, including
/// workers > 1: workers collect concurrently on private streams and
/// aggregation happens in worker-index order at a synchronous barrier.
TrainResult run_training(const TrainConfig& cfg, const EnvFactory& make_env);

/// Per-episode CSV with columns run_id,seed,episode,steps,
/// discounted_return,outcome. Stable schema, no timestamps.
void write_episode_csv(const std::string& path, const std::string& run_id,
                       std::span<const EpisodeRecord> records);

}  // namespace mpg::train

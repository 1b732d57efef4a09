#include "mpg/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "mpg/nn/optim.hpp"

namespace mpg::train {

std::vector<RolloutStep> collect_rollout(const Policy& policy,
                                         env::Environment& environment,
                                         std::vector<double>& obs,
                                         int rollout_len, RandomStream& rng) {
  if (rollout_len < 1) {
    throw std::invalid_argument("collect_rollout: rollout_len >= 1");
  }
  std::vector<RolloutStep> steps;
  steps.reserve(static_cast<size_t>(rollout_len));
  for (int t = 0; t < rollout_len; ++t) {
    RolloutStep step;
    step.state = obs;
    step.draw = policy.act(obs, rng);
    const env::StepResult result = environment.step(step.draw.env_action);
    step.reward = result.reward;
    step.terminal = result.terminal;
    step.next_state = result.next_state;
    obs = result.done() ? environment.reset(0) : result.next_state;
    steps.push_back(std::move(step));
  }
  return steps;
}

namespace {

// per-worker episode bookkeeping carried across segments
struct WorkerState {
  std::unique_ptr<env::Environment> env;
  RandomStream rng;
  std::vector<double> obs;
  double episode_return = 0.0;
  double gamma_pow = 1.0;
  int episode_steps = 0;

  WorkerState(std::unique_ptr<env::Environment> e, uint64_t seed,
              uint64_t stream)
      : env(std::move(e)), rng(seed, stream) {}
};

struct PendingEpisode {
  int steps = 0;
  double discounted_return = 0.0;
  env::Terminal outcome = env::Terminal::kNone;
};

// fold a collected segment into the worker's episode accumulators
std::vector<PendingEpisode> absorb_episodes(WorkerState& w, double gamma,
                                            std::span<const RolloutStep> steps) {
  std::vector<PendingEpisode> completed;
  for (const RolloutStep& step : steps) {
    w.episode_return += w.gamma_pow * step.reward;
    w.gamma_pow *= gamma;
    ++w.episode_steps;
    if (step.terminal != env::Terminal::kNone) {
      completed.push_back(
          PendingEpisode{w.episode_steps, w.episode_return, step.terminal});
      w.episode_return = 0.0;
      w.gamma_pow = 1.0;
      w.episode_steps = 0;
    }
  }
  return completed;
}

}  // namespace

double Critic::value(std::span<const double> state) const {
  return nn::forward(spec, params, state)[0];
}

std::vector<double> compute_returns(std::span<const double> rewards,
                                    std::span<const uint8_t> terminal,
                                    double gamma, double tail_bootstrap) {
  if (rewards.size() != terminal.size()) {
    throw std::invalid_argument("compute_returns: length mismatch");
  }
  std::vector<double> returns(rewards.size());
  double running = tail_bootstrap;
  for (size_t i = rewards.size(); i-- > 0;) {
    if (terminal[i]) running = 0.0;
    running = rewards[i] + gamma * running;
    returns[i] = running;
  }
  return returns;
}

std::unique_ptr<Policy> make_policy(const TrainConfig& cfg, int state_dim,
                                    int action_param_dim) {
  const uint64_t actor_seed = mix_seed(cfg.seed, 0x0ac7);
  switch (cfg.estimator) {
    case EstimatorKind::kStandard:
    case EstimatorKind::kAngular:
      return std::make_unique<DirectionalGaussianPolicy>(
          nn::MlpSpec::make(state_dim, action_param_dim, cfg.hidden_layers,
                            cfg.hidden_width, cfg.activation, actor_seed),
          cfg.sigma);
    case EstimatorKind::kWrappedAngle:
      return std::make_unique<WrappedAnglePolicy>(
          nn::MlpSpec::make(state_dim, 1, cfg.hidden_layers, cfg.hidden_width,
                            cfg.activation, actor_seed),
          cfg.sigma);
    case EstimatorKind::kParametrized:
    case EstimatorKind::kParametrizedMarginal:
      return std::make_unique<ParametrizedToyPolicy>(
          nn::MlpSpec::make(state_dim, 5, cfg.hidden_layers, cfg.hidden_width,
                            cfg.activation, actor_seed),
          cfg.sigma_move, cfg.sigma_thrust);
    case EstimatorKind::kClipped:
      throw std::invalid_argument(
          "make_policy: the clipped estimator has no training environment here");
  }
  throw std::invalid_argument("make_policy: unknown estimator");
}

Critic make_critic(const TrainConfig& cfg, int state_dim) {
  Critic critic;
  critic.spec =
      nn::MlpSpec::make(state_dim, 1, cfg.hidden_layers, cfg.hidden_width,
                        cfg.activation, mix_seed(cfg.seed, 0xc817));
  critic.params = nn::init_params(critic.spec);
  return critic;
}

UpdateStats a2c_update(Policy& actor, Critic& critic, const Batch& batch,
                       const TrainConfig& cfg) {
  if (batch.states.empty()) {
    throw std::invalid_argument("a2c_update: empty batch");
  }
  const size_t n = batch.states.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  nn::FlatParams actor_grad = actor.params();
  actor_grad.values.assign(actor_grad.values.size(), 0.0);
  nn::FlatParams critic_grad = nn::zero_params(critic.spec);

  UpdateStats stats;
  stats.batch_size = static_cast<int>(n);
  for (size_t i = 0; i < n; ++i) {
    const double v = critic.value(batch.states[i]);
    const double advantage = batch.returns[i] - v;
    stats.mean_advantage += advantage * inv_n;
    stats.critic_mse += advantage * advantage * inv_n;

    if (advantage != 0.0) {
      const std::vector<double> score =
          actor.score(batch.states[i], batch.draws[i], cfg.estimator);
      for (size_t j = 0; j < score.size(); ++j) {
        actor_grad.values[j] += advantage * score[j] * inv_n;
      }
    }
    // d/dtheta 1/2 (v - R)^2 = (v - R) dv/dtheta; negate for descent
    const nn::FlatParams dv = nn::backward(critic.spec, critic.params,
                                           batch.states[i],
                                           std::vector<double>{1.0});
    const double err = v - batch.returns[i];
    for (size_t j = 0; j < dv.values.size(); ++j) {
      critic_grad.values[j] += -err * dv.values[j] * inv_n;
    }
  }

  nn::sgd_step(actor.params(), actor_grad, cfg.lr_actor);
  nn::sgd_step(critic.params, critic_grad, cfg.lr_critic);
  return stats;
}

TrainResult run_training(const TrainConfig& cfg, const EnvFactory& make_env) {
  if (cfg.workers < 1) throw std::invalid_argument("train: workers >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw std::invalid_argument("train: gamma must lie in (0, 1)");
  }

  std::vector<WorkerState> workers;
  workers.reserve(static_cast<size_t>(cfg.workers));
  for (int w = 0; w < cfg.workers; ++w) {
    workers.emplace_back(make_env(), cfg.seed,
                         static_cast<uint64_t>(w) + 1);
    workers[static_cast<size_t>(w)].obs =
        workers[static_cast<size_t>(w)].env->reset(mix_seed(cfg.seed, w));
  }
  const int state_dim = workers.front().env->observation_dim();
  const int action_dim = workers.front().env->action_dim();

  TrainResult result;
  result.actor = make_policy(cfg, state_dim, action_dim);
  result.critic = make_critic(cfg, state_dim);

  Policy& actor = *result.actor;
  Critic& critic = result.critic;

  long episodes_done = 0;
  while (episodes_done < cfg.episodes) {
    // collection phase: workers run concurrently, parameters are read-only
    std::vector<std::vector<RolloutStep>> segments(
        static_cast<size_t>(cfg.workers));
    {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<size_t>(cfg.workers));
      for (int w = 0; w < cfg.workers; ++w) {
        threads.emplace_back([&, w]() {
          WorkerState& state = workers[static_cast<size_t>(w)];
          segments[static_cast<size_t>(w)] = collect_rollout(
              actor, *state.env, state.obs, cfg.rollout_len, state.rng);
        });
      }
      for (auto& t : threads) t.join();
    }

    // synchronous barrier: aggregate in worker-index order
    Batch batch;
    for (int w = 0; w < cfg.workers; ++w) {
      std::vector<RolloutStep>& segment = segments[static_cast<size_t>(w)];
      const std::vector<PendingEpisode> completed =
          absorb_episodes(workers[static_cast<size_t>(w)], cfg.gamma, segment);
      const size_t count = segment.size();
      std::vector<double> rewards(count);
      std::vector<uint8_t> terminal(count);
      for (size_t i = 0; i < count; ++i) {
        const RolloutStep& step = segment[i];
        rewards[i] = step.reward;
        terminal[i] = step.terminal != env::Terminal::kNone ? 1 : 0;
        if (step.terminal == env::Terminal::kTruncated) {
          // time-limit end: bootstrap the cut-off future
          rewards[i] += cfg.gamma * critic.value(step.next_state);
        }
      }
      double tail = 0.0;
      if (!terminal.empty() && !terminal.back()) {
        tail = critic.value(segment.back().next_state);
      }
      const std::vector<double> returns =
          compute_returns(rewards, terminal, cfg.gamma, tail);
      for (size_t i = 0; i < count; ++i) {
        batch.states.push_back(std::move(segment[i].state));
        batch.draws.push_back(std::move(segment[i].draw));
        batch.returns.push_back(returns[i]);
      }
      for (const PendingEpisode& ep : completed) {
        if (episodes_done >= cfg.episodes) break;
        result.episodes.push_back(EpisodeRecord{episodes_done, cfg.seed,
                                                ep.steps, ep.discounted_return,
                                                ep.outcome});
        ++episodes_done;
      }
    }

    a2c_update(actor, critic, batch, cfg);

    if (cfg.stop_condition && cfg.stop_condition(result.episodes)) break;
  }
  return result;
}

void write_episode_csv(const std::string& path, const std::string& run_id,
                       std::span<const EpisodeRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_episode_csv: cannot open " + path);
  out << "run_id,seed,episode,steps,discounted_return,outcome\n";
  char buf[64];
  for (const EpisodeRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.discounted_return);
    out << run_id << ',' << r.seed << ',' << r.episode_index << ',' << r.steps
        << ',' << buf << ',' << env::terminal_name(r.outcome) << '\n';
  }
}

}  // namespace mpg::train

#include "mpg/est/variance.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace mpg::est {

namespace {

struct BlockStats {
  long count = 0;
  std::vector<double> sum_g1;
  std::vector<double> sum_g2;
  double sum_sq1 = 0.0;
  double sum_sq2 = 0.0;
  double sum_sqdiff = 0.0;
};

struct Combined {
  double gap = 0.0;
  double msd = 0.0;
  double var1 = 0.0;
  double var2 = 0.0;
};

Combined combine(const std::vector<const BlockStats*>& blocks, int dim) {
  long n = 0;
  std::vector<double> s1(static_cast<size_t>(dim), 0.0);
  std::vector<double> s2(static_cast<size_t>(dim), 0.0);
  double q1 = 0.0, q2 = 0.0, sqd = 0.0;
  for (const BlockStats* b : blocks) {
    n += b->count;
    for (int j = 0; j < dim; ++j) {
      s1[static_cast<size_t>(j)] += b->sum_g1[static_cast<size_t>(j)];
      s2[static_cast<size_t>(j)] += b->sum_g2[static_cast<size_t>(j)];
    }
    q1 += b->sum_sq1;
    q2 += b->sum_sq2;
    sqd += b->sum_sqdiff;
  }
  Combined out;
  double m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double a = s1[static_cast<size_t>(j)] / static_cast<double>(n);
    const double b = s2[static_cast<size_t>(j)] / static_cast<double>(n);
    m1 += a * a;
    m2 += b * b;
  }
  out.var1 = q1 / static_cast<double>(n) - m1;
  out.var2 = q2 / static_cast<double>(n) - m2;
  out.gap = out.var1 - out.var2;
  out.msd = sqd / static_cast<double>(n);
  return out;
}

}  // namespace

VarianceReport measure_variance_coupled(const CoupledDrawFn& draw, int dim,
                                        long n, RandomStream& rng,
                                        int n_bootstrap) {
  if (n < 1000) {
    throw std::invalid_argument("measure_variance: need n >= 1000");
  }
  const int num_blocks = static_cast<int>(std::min<long>(1000, n));
  std::vector<BlockStats> blocks(static_cast<size_t>(num_blocks));
  for (auto& b : blocks) {
    b.sum_g1.assign(static_cast<size_t>(dim), 0.0);
    b.sum_g2.assign(static_cast<size_t>(dim), 0.0);
  }

  std::vector<double> g1, g2;
  for (long i = 0; i < n; ++i) {
    draw(rng, g1, g2);
    if (static_cast<int>(g1.size()) != dim || static_cast<int>(g2.size()) != dim) {
      throw std::invalid_argument("measure_variance: draw dimension mismatch");
    }
    BlockStats& b = blocks[static_cast<size_t>(i % num_blocks)];
    ++b.count;
    for (int j = 0; j < dim; ++j) {
      const double a = g1[static_cast<size_t>(j)];
      const double c = g2[static_cast<size_t>(j)];
      b.sum_g1[static_cast<size_t>(j)] += a;
      b.sum_g2[static_cast<size_t>(j)] += c;
      b.sum_sq1 += a * a;
      b.sum_sq2 += c * c;
      b.sum_sqdiff += (a - c) * (a - c);
    }
  }

  std::vector<const BlockStats*> all(blocks.size());
  for (size_t i = 0; i < blocks.size(); ++i) all[i] = &blocks[i];
  const Combined totals = combine(all, dim);

  VarianceReport report;
  report.n_samples = n;
  report.var_standard = totals.var1;
  report.var_marginal = totals.var2;
  report.gap = totals.gap;
  report.mean_sq_diff = totals.msd;
  report.gap_identity_residual = totals.gap - totals.msd;

  // bootstrap over blocks (draws are iid, so striped blocks are too)
  double gap_sum = 0.0, gap_sq = 0.0, res_sum = 0.0, res_sq = 0.0;
  std::vector<const BlockStats*> resample(blocks.size());
  for (int r = 0; r < n_bootstrap; ++r) {
    for (size_t i = 0; i < blocks.size(); ++i) {
      resample[i] = &blocks[rng.uniform_index(blocks.size())];
    }
    const Combined c = combine(resample, dim);
    const double res = c.gap - c.msd;
    gap_sum += c.gap;
    gap_sq += c.gap * c.gap;
    res_sum += res;
    res_sq += res * res;
  }
  const double nb = static_cast<double>(n_bootstrap);
  report.mc_stderr_gap =
      std::sqrt(std::max(0.0, (gap_sq - gap_sum * gap_sum / nb) / (nb - 1.0)));
  report.gap_identity_stderr =
      std::sqrt(std::max(0.0, (res_sq - res_sum * res_sum / nb) / (nb - 1.0)));
  return report;
}

VarianceReport measure_rollout_variance(const train::Policy& policy,
                                        const train::Critic& critic,
                                        const train::EnvFactory& make_env,
                                        const RolloutVarianceOptions& options,
                                        RandomStream& rng) {
  const auto kinds = policy.coupled_kinds();
  std::unique_ptr<env::Environment> environment = make_env();
  std::vector<double> obs = environment->reset(0);

  struct Pending {
    std::vector<double> g1;
    std::vector<double> g2;
  };
  std::vector<Pending> buffer;
  size_t cursor = 0;

  const auto refill = [&](RandomStream& r) {
    struct Step {
      std::vector<double> state;
      train::PolicyDraw draw;
      double reward = 0.0;
      env::Terminal terminal = env::Terminal::kNone;
      std::vector<double> next_state;
    };
    std::vector<Step> segment(static_cast<size_t>(options.rollout_len));
    for (auto& step : segment) {
      step.state = obs;
      step.draw = policy.act(obs, r);
      const env::StepResult sr = environment->step(step.draw.env_action);
      step.reward = sr.reward;
      step.terminal = sr.terminal;
      step.next_state = sr.next_state;
      obs = sr.done() ? environment->reset(0) : sr.next_state;
    }
    double running = segment.back().terminal == env::Terminal::kNone
                         ? critic.value(segment.back().next_state)
                         : 0.0;
    std::vector<double> returns(segment.size());
    for (size_t i = segment.size(); i-- > 0;) {
      double reward = segment[i].reward;
      if (segment[i].terminal == env::Terminal::kTruncated) {
        reward += options.gamma * critic.value(segment[i].next_state);
      }
      if (segment[i].terminal != env::Terminal::kNone) running = 0.0;
      running = reward + options.gamma * running;
      returns[i] = running;
    }
    buffer.clear();
    cursor = 0;
    for (size_t i = 0; i < segment.size(); ++i) {
      const double advantage = returns[i] - critic.value(segment[i].state);
      Pending p;
      p.g1 = policy.score(segment[i].state, segment[i].draw, kinds.first);
      p.g2 = policy.score(segment[i].state, segment[i].draw, kinds.second);
      for (auto& v : p.g1) v *= advantage;
      for (auto& v : p.g2) v *= advantage;
      buffer.push_back(std::move(p));
    }
  };

  const auto draw_pair = [&](RandomStream& r, std::vector<double>& g1,
                             std::vector<double>& g2) {
    if (cursor >= buffer.size()) refill(r);
    g1 = std::move(buffer[cursor].g1);
    g2 = std::move(buffer[cursor].g2);
    ++cursor;
  };
  return measure_variance_coupled(draw_pair, policy.param_count(), options.n,
                                  rng, options.n_bootstrap);
}

VarianceReport measure_variance(const train::Policy& policy,
                                std::span<const std::vector<double>> states,
                                const QFunction& q,
                                train::EstimatorKind marginal_kind, long n,
                                RandomStream& rng, int n_bootstrap) {
  if (states.empty()) {
    throw std::invalid_argument("measure_variance: need at least one state");
  }
  const auto kinds = policy.coupled_kinds();
  const train::EstimatorKind standard_kind = kinds.first;
  const train::EstimatorKind expected_marginal = kinds.second;
  if (marginal_kind != expected_marginal) {
    throw std::invalid_argument(
        "measure_variance: estimator kind does not match the policy family");
  }
  long index = 0;
  const auto draw_pair = [&](RandomStream& r, std::vector<double>& g1,
                             std::vector<double>& g2) {
    const std::vector<double>& state = states[static_cast<size_t>(index % static_cast<long>(states.size()))];
    ++index;
    const train::PolicyDraw draw = policy.act(state, r);
    const double weight = q(state, draw.env_action);
    g1 = policy.score(state, draw, standard_kind);
    g2 = policy.score(state, draw, marginal_kind);
    for (auto& v : g1) v *= weight;
    for (auto& v : g2) v *= weight;
  };
  return measure_variance_coupled(draw_pair, policy.param_count(), n, rng,
                                  n_bootstrap);
}

}  // namespace mpg::est

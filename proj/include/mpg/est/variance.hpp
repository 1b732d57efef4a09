#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mpg/common/random.hpp"
#include "mpg/train/policy.hpp"
#include "mpg/train/trainer.hpp"

namespace mpg::est {

/// Coupled variance comparison of two estimators of the same expectation.
/// Variances are trace variances E||y - Ey||^2; the gap carries a bootstrap
/// standard error. mean_sq_diff is E||g1 - g2||^2 over the same coupled
/// draws, whose population value equals the gap whenever g2 is the
/// conditional expectation of g1, so the residual tests that identity.
struct VarianceReport {
  double var_standard = 0.0;
  double var_marginal = 0.0;
  double gap = 0.0;  // var_standard - var_marginal
  double mc_stderr_gap = 0.0;
  long n_samples = 0;
  double mean_sq_diff = 0.0;
  double gap_identity_residual = 0.0;  // gap - mean_sq_diff
  double gap_identity_stderr = 0.0;
};

/// Produces one coupled pair (g1, g2) per call; both vectors must come back
/// with the same fixed dimension.
using CoupledDrawFn = std::function<void(
    RandomStream& rng, std::vector<double>& g1, std::vector<double>& g2)>;

/// q(state, executed action), the scale applied to both scores.
using QFunction = std::function<double(std::span<const double> state,
                                       std::span<const double> env_action)>;

VarianceReport measure_variance_coupled(const CoupledDrawFn& draw, int dim,
                                        long n, RandomStream& rng,
                                        int n_bootstrap = 1000);

/// Draws n coupled estimator pairs from the policy, cycling the given
/// states. The standard side is the policy family's sampling-distribution
/// score; `marginal_kind` picks the marginal side (it must match the
/// family's coupled pair). n must be at least 1000.
VarianceReport measure_variance(const train::Policy& policy,
                                std::span<const std::vector<double>> states,
                                const QFunction& q,
                                train::EstimatorKind marginal_kind, long n,
                                RandomStream& rng, int n_bootstrap = 1000);

struct RolloutVarianceOptions {
  double gamma = 0.99;
  int rollout_len = 20;
  long n = 100000;
  int n_bootstrap = 1000;
};

/// Variance of the gradient samples exactly as the synchronous update forms
/// them: on-policy rollouts, q equal to the n-step advantage R - v(s). Each
/// executed draw yields one coupled (standard, marginal) pair.
VarianceReport measure_rollout_variance(const train::Policy& policy,
                                        const train::Critic& critic,
                                        const train::EnvFactory& make_env,
                                        const RolloutVarianceOptions& options,
                                        RandomStream& rng);

}  // namespace mpg::est

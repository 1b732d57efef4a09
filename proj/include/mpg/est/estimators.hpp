#pragma once

#include <span>
#include <vector>

#include "mpg/dist/types.hpp"

namespace mpg::est {

/// One policy-gradient sample: q times the score chained to the flat
/// parameter vector.
struct GradSample {
  std::vector<double> grad;
  double weight = 0.0;  // the scale q, typically an advantage estimate
};

/// grad = q * chained_score.
GradSample pg_estimate(std::span<const double> chained_score, double q);

/// Softmax log-probability gradient in logit space: e_k - softmax(logits).
std::vector<double> softmax_log_prob_grad(std::span<const double> logits,
                                          int k);

/// Output-space score for a draw from a parametrized action space. Layout:
/// [discrete logit block | action-0 parameter block | action-1 block | ...].
/// The selected action's block receives `score_k` (the standard or marginal
/// parameter score, per the caller's estimator choice); every other
/// parameter block is zero. `param_dims` lists the per-action parameter
/// dimension, 0 for unparametrized actions.
std::vector<double> parametrized_score(std::span<const double> logits,
                                       const std::vector<int>& param_dims,
                                       int k, std::span<const double> score_k);

}  // namespace mpg::est

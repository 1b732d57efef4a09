#pragma once

#include "mpg/nn/mlp.hpp"

namespace mpg::nn {

/// Gradient-ascent step theta += lr * grad. Descent callers negate the
/// gradient.
void sgd_step(FlatParams& params, const FlatParams& grad, double lr);

/// Bias-corrected first/second moment state for Adam.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
};

/// Ascent Adam update; state grows lazily to the parameter size on first use.
void adam_step(AdamState& state, FlatParams& params, const FlatParams& grad,
               double lr, double beta1, double beta2, double eps);

}  // namespace mpg::nn

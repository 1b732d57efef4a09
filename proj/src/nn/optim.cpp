#include "mpg/nn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace mpg::nn {

void sgd_step(FlatParams& params, const FlatParams& grad, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: lr must be > 0");
  if (grad.values.size() != params.values.size()) {
    throw std::invalid_argument("sgd_step: size mismatch");
  }
  for (size_t i = 0; i < params.values.size(); ++i) {
    params.values[i] += lr * grad.values[i];
  }
}

void adam_step(AdamState& state, FlatParams& params, const FlatParams& grad,
               double lr, double beta1, double beta2, double eps) {
  if (grad.values.size() != params.values.size()) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  if (state.m.empty()) {
    state.m.assign(params.values.size(), 0.0);
    state.v.assign(params.values.size(), 0.0);
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < params.values.size(); ++i) {
    const double g = grad.values[i];
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * g;
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params.values[i] += lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace mpg::nn

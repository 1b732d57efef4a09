#include "mpg/est/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpg::est {

GradSample pg_estimate(std::span<const double> chained_score, double q) {
  if (!std::isfinite(q)) throw std::invalid_argument("pg_estimate: q not finite");
  GradSample out;
  out.weight = q;
  out.grad.resize(chained_score.size());
  for (size_t i = 0; i < chained_score.size(); ++i) {
    if (!std::isfinite(chained_score[i])) {
      throw std::invalid_argument("pg_estimate: score not finite");
    }
    out.grad[i] = q * chained_score[i];
  }
  return out;
}

std::vector<double> softmax_log_prob_grad(std::span<const double> logits,
                                          int k) {
  if (k < 0 || k >= static_cast<int>(logits.size())) {
    throw std::invalid_argument("softmax_log_prob_grad: k out of range");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  std::vector<double> probs(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    z += probs[i];
  }
  std::vector<double> grad(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    grad[i] = (static_cast<int>(i) == k ? 1.0 : 0.0) - probs[i] / z;
  }
  return grad;
}

std::vector<double> parametrized_score(std::span<const double> logits,
                                       const std::vector<int>& param_dims,
                                       int k, std::span<const double> score_k) {
  if (param_dims.size() != logits.size()) {
    throw std::invalid_argument("parametrized_score: size mismatch");
  }
  if (k < 0 || k >= static_cast<int>(param_dims.size())) {
    throw std::invalid_argument("parametrized_score: k out of range");
  }
  if (static_cast<int>(score_k.size()) != param_dims[static_cast<size_t>(k)]) {
    throw std::invalid_argument(
        "parametrized_score: parameter score has wrong dimension");
  }
  int total = static_cast<int>(logits.size());
  for (int d : param_dims) total += d;
  std::vector<double> out(static_cast<size_t>(total), 0.0);

  const std::vector<double> discrete = softmax_log_prob_grad(logits, k);
  std::copy(discrete.begin(), discrete.end(), out.begin());

  int offset = static_cast<int>(logits.size());
  for (int i = 0; i < k; ++i) offset += param_dims[static_cast<size_t>(i)];
  std::copy(score_k.begin(), score_k.end(),
            out.begin() + static_cast<ptrdiff_t>(offset));
  return out;
}

}  // namespace mpg::est

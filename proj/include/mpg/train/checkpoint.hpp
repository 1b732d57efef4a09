#pragma once

#include <string>

#include "mpg/nn/mlp.hpp"
#include "mpg/train/policy.hpp"

namespace mpg::train {

/// Persisted actor/critic pair. Plain-text, versioned: a header naming the
/// estimator and sigma, then each network as its spec followed by the flat
/// parameter vector in declared order, one hexfloat per line (bit-exact
/// round trip).
struct Checkpoint {
  EstimatorKind estimator = EstimatorKind::kAngular;
  double sigma = 0.1;
  nn::MlpSpec actor_spec;
  nn::FlatParams actor_params;
  nn::MlpSpec critic_spec;
  nn::FlatParams critic_params;
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace mpg::train

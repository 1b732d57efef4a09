#pragma once

#include "mpg/env/environment.hpp"

namespace mpg::env {

/// Small test bed for policies over a discrete action set with continuous
/// parameters. Two actions on a 2-D plane with a potential-shaped reward
/// toward a fixed goal:
///   k = 0 "move":   parameter is a unit direction, displacement 0.1
///   k = 1 "thrust": parameter is a scalar in [-1, 1], displacement
///                   0.15 * omega along the x axis
/// Actions are encoded as [k, w0, w1]; thrust reads w0 only. Episodes run a
/// fixed 50 steps. Fully deterministic.
class ToyParametrized final : public Environment {
 public:
  static constexpr int kNumActions = 2;
  static constexpr double kMoveStep = 0.1;
  static constexpr double kThrustStep = 0.15;
  static constexpr int kEpisodeSteps = 50;

  std::vector<double> reset(uint64_t seed) override;
  StepResult step(std::span<const double> action) override;

  int observation_dim() const override { return 2; }
  int action_dim() const override { return 3; }

  static double potential(std::span<const double> state);

 private:
  std::vector<double> pos_;
  int steps_taken_ = 0;
  bool episode_over_ = true;
};

}  // namespace mpg::env

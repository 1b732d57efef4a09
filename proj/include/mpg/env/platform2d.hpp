#pragma once

#include "mpg/env/environment.hpp"

namespace mpg::env {

/// Navigation on the square platform [-1.5, 1.5]^2. The agent starts at
/// (-1, -1), the goal sits at (1, 1), and actions are unit directions
/// executed as displacements of length `step_size`. Rewards are shaped by
/// the potential phi(s) = ||s - goal||, so the undiscounted episode reward
/// telescopes to phi(start) - phi(end). Episodes end at the goal ball, on
/// leaving the platform, or after `max_steps` steps.
class Platform2D final : public Environment {
 public:
  struct Options {
    double step_size = 0.1;
    double goal_radius = 0.1;
    int max_steps = 200;
  };

  Platform2D() : Platform2D(Options{}) {}
  explicit Platform2D(const Options& options);

  std::vector<double> reset(uint64_t seed) override;
  StepResult step(std::span<const double> direction) override;

  int observation_dim() const override { return 2; }
  int action_dim() const override { return 2; }

  static double potential(std::span<const double> state);

  /// Discounted return of the straight-line policy, the best achievable:
  /// ceil((phi(start) - goal_radius)/step_size) steps of reward step_size.
  static double optimal_discounted_return(const Options& options, double gamma,
                                          int* steps_out = nullptr);

  const Options& options() const { return options_; }

 private:
  Options options_;
  std::vector<double> pos_;
  int steps_taken_ = 0;
  bool episode_over_ = true;
};

}  // namespace mpg::env

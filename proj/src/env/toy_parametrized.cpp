#include "mpg/env/toy_parametrized.hpp"

#include <cmath>
#include <stdexcept>

namespace mpg::env {

namespace {
constexpr double kGoalX = 1.0;
constexpr double kGoalY = 0.5;
}  // namespace

double ToyParametrized::potential(std::span<const double> state) {
  const double dx = state[0] - kGoalX;
  const double dy = state[1] - kGoalY;
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<double> ToyParametrized::reset(uint64_t /*seed*/) {
  pos_ = {0.0, 0.0};
  steps_taken_ = 0;
  episode_over_ = false;
  return pos_;
}

StepResult ToyParametrized::step(std::span<const double> action) {
  if (episode_over_) {
    throw std::logic_error("ToyParametrized: step after episode end");
  }
  if (action.size() != 3) {
    throw std::invalid_argument("ToyParametrized: action must be [k, w0, w1]");
  }
  const int k = static_cast<int>(action[0]);
  StepResult result;
  result.next_state = pos_;
  if (k == 0) {
    const double norm =
        std::sqrt(action[1] * action[1] + action[2] * action[2]);
    if (std::fabs(norm - 1.0) > 1e-9) {
      throw std::invalid_argument("ToyParametrized: move needs a unit direction");
    }
    result.next_state[0] += kMoveStep * action[1];
    result.next_state[1] += kMoveStep * action[2];
  } else if (k == 1) {
    const double omega = action[1];
    if (!(omega >= -1.0 && omega <= 1.0)) {
      throw std::invalid_argument("ToyParametrized: thrust parameter outside [-1, 1]");
    }
    result.next_state[0] += kThrustStep * omega;
  } else {
    throw std::invalid_argument("ToyParametrized: invalid discrete action");
  }
  result.reward = potential(pos_) - potential(result.next_state);
  ++steps_taken_;
  if (steps_taken_ >= kEpisodeSteps) result.terminal = Terminal::kTruncated;
  pos_ = result.next_state;
  episode_over_ = result.done();
  return result;
}

}  // namespace mpg::env

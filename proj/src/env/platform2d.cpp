#include "mpg/env/platform2d.hpp"

#include <cmath>
#include <stdexcept>

namespace mpg::env {

namespace {
constexpr double kGoalX = 1.0;
constexpr double kGoalY = 1.0;
constexpr double kHalfExtent = 1.5;
constexpr double kStartX = -1.0;
constexpr double kStartY = -1.0;
}  // namespace

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::kNone:
      return "none";
    case Terminal::kGoal:
      return "goal";
    case Terminal::kFellOff:
      return "fell_off";
    case Terminal::kTruncated:
      return "truncated";
  }
  return "none";
}

Platform2D::Platform2D(const Options& options) : options_(options) {
  if (!(options_.step_size > 0.0) || !(options_.goal_radius > 0.0) ||
      options_.max_steps <= 0) {
    throw std::invalid_argument("Platform2D: invalid options");
  }
}

double Platform2D::potential(std::span<const double> state) {
  const double dx = state[0] - kGoalX;
  const double dy = state[1] - kGoalY;
  return std::sqrt(dx * dx + dy * dy);
}

double Platform2D::optimal_discounted_return(const Options& options,
                                             double gamma, int* steps_out) {
  const double start[2] = {kStartX, kStartY};
  const double distance = potential(start);
  const int steps = static_cast<int>(
      std::ceil((distance - options.goal_radius) / options.step_size));
  if (steps_out != nullptr) *steps_out = steps;
  double total = 0.0;
  double discount = 1.0;
  for (int t = 0; t < steps; ++t) {
    total += discount * options.step_size;
    discount *= gamma;
  }
  return total;
}

std::vector<double> Platform2D::reset(uint64_t /*seed*/) {
  pos_ = {kStartX, kStartY};
  steps_taken_ = 0;
  episode_over_ = false;
  return pos_;
}

StepResult Platform2D::step(std::span<const double> direction) {
  if (episode_over_) {
    throw std::logic_error("Platform2D: step after episode end");
  }
  if (direction.size() != 2) {
    throw std::invalid_argument("Platform2D: action must be 2-dimensional");
  }
  const double norm =
      std::sqrt(direction[0] * direction[0] + direction[1] * direction[1]);
  if (std::fabs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument("Platform2D: action must be a unit direction");
  }

  StepResult result;
  result.next_state = {pos_[0] + options_.step_size * direction[0],
                       pos_[1] + options_.step_size * direction[1]};
  result.reward = potential(pos_) - potential(result.next_state);
  ++steps_taken_;

  if (potential(result.next_state) <= options_.goal_radius) {
    result.terminal = Terminal::kGoal;
  } else if (std::fabs(result.next_state[0]) > kHalfExtent ||
             std::fabs(result.next_state[1]) > kHalfExtent) {
    result.terminal = Terminal::kFellOff;
  } else if (steps_taken_ >= options_.max_steps) {
    result.terminal = Terminal::kTruncated;
  }

  pos_ = result.next_state;
  episode_over_ = result.done();
  return result;
}

}  // namespace mpg::env

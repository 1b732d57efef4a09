#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mpg::env {

enum class Terminal { kNone, kGoal, kFellOff, kTruncated };

const char* terminal_name(Terminal t);

struct StepResult {
  std::vector<double> next_state;
  double reward = 0.0;
  Terminal terminal = Terminal::kNone;

  bool done() const { return terminal != Terminal::kNone; }
};

/// Single-owner episodic environment. One instance per worker.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::vector<double> reset(uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;

  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
};

}  // namespace mpg::env

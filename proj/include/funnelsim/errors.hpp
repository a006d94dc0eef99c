#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace funnelsim {

/// Raised when a stage gain denominator 1 - phi^2 |e|^2 drops below the guard.
class FunnelViolation : public std::runtime_error {
public:
  FunnelViolation(std::size_t stage, double denominator)
      : std::runtime_error("funnel violation at stage " + std::to_string(stage) +
                           " (denominator " + std::to_string(denominator) + ")"),
        stage_(stage), denominator_(denominator) {}

  std::size_t stage() const noexcept { return stage_; }
  double denominator() const noexcept { return denominator_; }

private:
  std::size_t stage_;
  double denominator_;
};

class InadmissibleInitialCondition : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class NoRelativeDegree : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class GainDegenerate : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CflViolation : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operator queried at a time not yet covered by its input history.
class HistoryGap : public std::out_of_range {
  using std::out_of_range::out_of_range;
};

}  // namespace funnelsim

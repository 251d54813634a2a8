#pragma once

#include <stdexcept>
#include <string>

namespace gpme {

/// Invalid user-facing configuration (bad flags, inconsistent scheme choices).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Divergence, NaN/Inf, or nonlinear-solver breakdown during a run.
/// Carries the step and node where the failure was detected when known.
/// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, long long step = -1, int node = -1)
      : std::runtime_error(what), step_(step), node_(node) {}

  long long step() const { return step_; }
  int node() const { return node_; }

 private:
  long long step_;
  int node_;
};

}  // namespace gpme

#pragma once

#include <stdexcept>
#include <string>

namespace sglimit {

/// Invalid user-supplied configuration, model file, or precondition.
/// The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-finite iterate, solver did not converge).
/// The CLI maps this to exit status 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by run_sgld / run_linearized when an iterate overflows.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : NumericError(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace sglimit

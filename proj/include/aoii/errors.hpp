#pragma once

#include <stdexcept>
#include <string>

namespace aoii {

// Raised when an argument or parameter set violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised for parameter regimes where a quantity is not defined, e.g. a channel
// that never delivers (p_s = 0) or a source that never leaves its state.
class InfeasibleRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Value iteration did not reach the requested span tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_span)
      : std::runtime_error(what), last_span_(last_span) {}
  double last_span() const noexcept { return last_span_; }

 private:
  double last_span_;
};

// A solved policy lacks the structure the theory guarantees (e.g. it is not
// monotone in the penalty).
class StructuralViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace aoii

#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

/// Base of every numeric fault raised by the library. The CLI maps these to
/// exit code 2; bad user input is reported separately as ValidationError.
class NumericFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation would leave the double exponent range.
class RangeError : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

/// An iterative solver hit its iteration cap without meeting tolerance.
class SolverFault : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

class QuadratureFault : public NumericFault {
 public:
  using NumericFault::NumericFault;
};

/// A named invariant failed (e.g. the flow left the positive cone).
class InvariantViolation : public NumericFault {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : NumericFault(invariant + ": " + detail), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace soliton

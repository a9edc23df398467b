#pragma once

#include <stdexcept>
#include <string>

namespace nomaec {

// Argument outside the mathematical domain of an operation, or a violated
// type invariant (rank out of range, power split not summing to one, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative kernel (quadrature, series, Newton) ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result that would be meaningless, e.g. a non-positive logarithm argument
// produced by cancellation in an alternating sum.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nomaec

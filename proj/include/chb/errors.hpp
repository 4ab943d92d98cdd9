#pragma once

#include <stdexcept>
#include <string>

namespace chb {

// Direct factorization hit a zero pivot. pivot_index is the 0-based
// row/column where elimination broke down, or -1 if it could not be
// attributed.
class SingularMatrixError : public std::runtime_error {
public:
  SingularMatrixError(const std::string& what, int pivot_index)
      : std::runtime_error(what), pivot_index(pivot_index) {}
  int pivot_index;
};

// Right-hand side of a constrained singular system is not solvable even
// after projecting out the constant component.
class CompatibilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Iterative solve exhausted its iteration budget.
class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, double final_residual)
      : std::runtime_error(what), final_residual(final_residual) {}
  double final_residual;
};

// Config text could not be parsed; line is 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line(line) {}
  int line;
};

// A sequence expected to be nonincreasing increased.
class MonotonicityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An input violates a stated assumption of the requested computation.
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace chb

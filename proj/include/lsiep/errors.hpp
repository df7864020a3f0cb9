#pragma once

#include <stdexcept>
#include <string>

namespace lsiep {

/// Operands do not agree with the (n, l, m) shape of the problem.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization broke down or an operator produced non-finite values.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The QR factor of Q + t*Q*Omega could not be normalized (zero or non-finite
/// diagonal in R). Line searches treat this as a rejected trial step.
class RetractionError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Backtracking exhausted its budget without meeting the Armijo condition.
class LineSearchError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Invalid user-facing configuration (solver parameters, instance specs).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace lsiep

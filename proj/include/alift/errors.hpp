#pragma once

#include <stdexcept>
#include <string>

namespace alift {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid inputs: malformed tables, bad parameters, schema problems.
/// CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures: infeasible solves, broken invariants at runtime.
/// CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NegativeEntryError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SumNotOneError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ZeroMarginalError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InconsistentMechanismError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasibleEpsError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CapExceededError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResampleLimitError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SchemaMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace alift

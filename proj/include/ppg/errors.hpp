#pragma once

#include <stdexcept>
#include <string>

namespace ppg {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid value for an operation (zero denominator, non-prime in a prime
/// set, valuation of zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic attempted between values in incompatible quadratic fields.
class FieldMismatchError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition of a construction.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A bounded search ran out of budget before finding a witness.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& what, long bound)
      : Error(what), bound_(bound) {}
  long bound() const { return bound_; }

 private:
  long bound_;
};

/// Invariant the library itself maintains was observed broken.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppg

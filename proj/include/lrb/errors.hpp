#pragma once

#include <stdexcept>
#include <string>

namespace lrb {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t <= 0, s > t, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A continuous-class operation was called on a discrete kernel, or vice versa.
class ClassMismatchError : public Error {
 public:
  using Error::Error;
};

/// Bridge pin with zero (or infinite) transition density / mass.
class InvalidPinError : public Error {
 public:
  using Error::Error;
};

/// Conditioning state with psi_s = 0 (or infinite): the state cannot be reached.
class UnreachableStateError : public Error {
 public:
  using Error::Error;
};

/// Terminal law or spec failing a structural requirement.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Quadrature non-convergence, non-finite results, failed inversions.
class NumericError : public Error {
 public:
  using Error::Error;
};

class InfiniteMomentError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoRootError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonMonotoneError : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnsupportedKernelError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration problem; `field` names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace lrb

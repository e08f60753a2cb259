#pragma once

#include <stdexcept>
#include <string>

namespace zslnorm {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape or dimension mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Not enough samples/classes/columns for the requested statistic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Zero-variance, zero-norm or otherwise degenerate input.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Invalid option, key or hyperparameter. CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent dataset contents. CLI maps this to exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents.
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

/// Label outside the valid class range.
class LabelError : public DataError {
 public:
  using DataError::DataError;
};

/// Operation called in an invalid object state (stale cache, detached probe).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace zslnorm

#pragma once

#include <stdexcept>
#include <string>

namespace efs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cube or cell set does not match the resolution of the grid it is used on.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Input is degenerate for the operation (zero weight, zero function).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Malformed spec strings, files or command lines. Maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration violates a hypothesis it must satisfy.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace efs

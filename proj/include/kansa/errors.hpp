#pragma once

#include <stdexcept>
#include <string>

namespace kansa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (e.g. K_nu at x <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// phi_0(0): K_0 diverges logarithmically at the origin.
class SingularProfileError : public Error {
 public:
  using Error::Error;
};

/// Invalid kernel, domain or weight parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DegenerateSetError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input or failed factorization in the dense solvers.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration problem; the message names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace kansa

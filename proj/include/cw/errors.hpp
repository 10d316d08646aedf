#pragma once

#include <stdexcept>
#include <string>

namespace cw {

// Base for every failure raised by the toolkit. The CLI maps the subclasses
// onto exit codes (config -> 3, numeric -> 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inadmissible scaling regime or malformed run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Centering point does not have the flatness the regime needs.
class RegimeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Overflow, non-convergence or other floating-point breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace cw

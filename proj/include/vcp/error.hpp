#pragma once

#include <stdexcept>
#include <string>

namespace vcp {

/// Base of every error thrown by the library. `kind()` is the class name the
/// CLI reports next to its nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
  virtual int exit_code() const noexcept { return 1; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConfigError"; }
  int exit_code() const noexcept override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "IoError"; }
  int exit_code() const noexcept override { return 3; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DimensionError"; }
  int exit_code() const noexcept override { return 4; }
};

class GuardExceeded : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "GuardExceeded"; }
  int exit_code() const noexcept override { return 5; }
};

/// A resource-allocation or association constraint was violated.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConstraintViolation"; }
  int exit_code() const noexcept override { return 6; }
};

class RangeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "RangeError"; }
  int exit_code() const noexcept override { return 7; }
};

}  // namespace vcp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omm {

/// Malformed or inconsistent configuration input. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid sweep specification (bad parameter path, bad axis). Raised before
/// any point is evaluated.
class SpecError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// File could not be read or written. Maps to CLI exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base of all numerical failures. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_change)
      : NumericalError(what), last_change_(last_change) {}
  double last_change() const noexcept { return last_change_; }

 private:
  double last_change_;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace omm

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voltstab {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line parameters unsuitable for the closed-form two-node algebra (r != x,
/// non-positive v1 or r).
class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The coupled power-flow constraint has no admissible real voltage > 0.
class NoRealPositiveRoot : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Disturbance target that does not exist for the scenario's model.
class UnknownTarget : public Error {
 public:
  using Error::Error;
};

/// Invalid scenario. `line()` is 0 when the problem is not tied to a line
/// of a scenario file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace voltstab

#pragma once

#include <stdexcept>
#include <string>

namespace mdspin {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A parameter violates its precondition (non-positive density, zero slope...).
class DomainError : public Error {
public:
  DomainError(std::string field, std::string message)
      : Error(field + ": " + message), field_(std::move(field)), message_(std::move(message)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::string field_;
  std::string message_;
};

// A coordinate lies outside the interval an operation is defined on.
class RangeError : public Error {
public:
  using Error::Error;
};

// Numerical integration diverged or failed its self-check.
class SolverError : public Error {
public:
  using Error::Error;
};

// Invalid configuration (grid too small, stability bound violated, bad config file).
class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string& what, int line = 0)
      : Error(format(field, what, line)), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& field, const std::string& what, int line) {
    std::string msg;
    if (line > 0) msg = "line " + std::to_string(line) + ": ";
    if (!field.empty()) msg += field + ": ";
    return msg + what;
  }
  std::string field_;
  int line_;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace mdspin

#pragma once

#include <stdexcept>
#include <string>

namespace bundlekit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller handed in a point or parameter outside the operation's domain
/// (wrong dimension, non-finite coordinate, nonpositive step parameter, ...).
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// An objective returned a non-finite value or gradient.
class OracleFailure : public Error {
 public:
  OracleFailure(std::string function_name, const std::string& what)
      : Error(function_name + ": " + what), function_name_(std::move(function_name)) {}

  const std::string& function_name() const noexcept { return function_name_; }

 private:
  std::string function_name_;
};

/// Linear algebra breakdown (failed factorization, singular system).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An iterative inner solver stopped at its iteration ceiling without
/// reaching the requested residual.
class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, double residual, long iterations)
      : NumericError(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

/// Malformed or inconsistent configuration. `line()` is 0 when the error is
/// not tied to a line of a config file.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Too few usable records to perform a fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace bundlekit

#pragma once

#include <stdexcept>
#include <string>

namespace mstage {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vectors of mismatched length handed to a kernel.
class InputShapeError : public Error {
 public:
  using Error::Error;
};

/// A parameter or scenario violates a documented invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// State enumeration exceeded the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Transition kernel is not row-stochastic, or a model is otherwise inconsistent.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// The chain has more than one closed communicating class.
class MultiClassError : public ModelError {
 public:
  using ModelError::ModelError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Mode index outside the algorithm's mode set.
class InvalidModeError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file; carries the offending line (0 if unknown).
class UsageError : public Error {
 public:
  UsageError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mstage

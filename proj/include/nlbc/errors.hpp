#pragma once

#include <stdexcept>
#include <string>

namespace nlbc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to an operator constructor or a shape mismatch.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A boundary rotation was requested where one of its denominators vanishes.
class DegenerateRotation : public Error {
 public:
  using Error::Error;
};

/// A state outside the admissible set of its system (e.g. nonpositive depth).
class InadmissibleState : public Error {
 public:
  using Error::Error;
};

/// The sign pattern of the boundary form at a node has no matching R/S pair.
class RegimeChange : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a failed nonlinear solve during time integration.
class NumericalAbort : public Error {
 public:
  NumericalAbort(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Configuration error; carries the dotted path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace nlbc

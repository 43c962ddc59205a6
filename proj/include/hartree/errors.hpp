#pragma once

#include <stdexcept>
#include <string>

namespace hartree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented range of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a radial grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// The numerics produced non-finite values or failed to converge.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// A computed object violates one of its stated invariants.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible file contents (checkpoints, tiling files).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Configuration text rejected by the strict parser.
class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hartree

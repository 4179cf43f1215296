#pragma once

#include <stdexcept>
#include <string>

namespace activesub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller supplied an argument outside an operation's contract.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A mathematical quantity is undefined for the given input
/// (zero matrix, missing eigenvalue gap, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Text input (matrix files, JSON configs) could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A sampled gradient violated the declared Lipschitz bound.
class ModelViolation : public Error {
 public:
  using Error::Error;
};

/// The requested problem size is not supported by a builtin.
class UnsupportedSize : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace activesub

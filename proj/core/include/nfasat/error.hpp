#pragma once

#include <stdexcept>
#include <string>

namespace nfasat {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed sample, DIMACS, cuts or NFA input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The encoding would exceed the configured literal budget.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Encoding did not finish before its deadline.
class GenerationTimeout : public Error {
 public:
  using Error::Error;
};

/// The SAT solver crashed or produced output that could not be understood.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace nfasat

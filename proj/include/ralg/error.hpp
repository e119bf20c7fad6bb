#pragma once

#include <stdexcept>
#include <string>

namespace ralg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (bad sort, bad arity, nonpositive bound, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A finite prefix ran out before a construction could be completed.
class ExhaustionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ralg

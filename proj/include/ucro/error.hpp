#pragma once

#include <stdexcept>
#include <string>

namespace ucro {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON syntax, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant. The message names the
// violated invariant and where it was found.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Enumeration refused because the instance is too large.
class GuardError : public Error {
 public:
  using Error::Error;
};

// The MILP backend failed or returned an unusable result.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ucro

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slsvm {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a semantic rule (unknown symbol,
/// nondeterministic transition, parameter out of domain, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No transition rule matches a running configuration: the suite is malformed.
class NoRuleApplies : public Error {
 public:
  using Error::Error;
};

/// A suite function read a state variable that has not been assigned yet.
class AbsentField : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnnormalizedMachine : public Error {
 public:
  using Error::Error;
};

class MultipleExtensions : public Error {
 public:
  using Error::Error;
};

class NoExtension : public Error {
 public:
  using Error::Error;
};

/// Every non-initial tile has been rejected for the current position.
class ExhaustedBlacklist : public Error {
 public:
  using Error::Error;
};

class MalformedSegment : public Error {
 public:
  using Error::Error;
};

}  // namespace slsvm

#pragma once

#include <stdexcept>
#include <string>

namespace dsel {

/// Base class for all toolkit errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (carries the 1-based line number when known).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input violates a data invariant (duplicate id, unknown domain, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range parameter or inconsistent dimensions.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or similar numerical breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsel

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prtail {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its valid domain (alpha <= 1, c outside (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An operation was invoked on an object in an unusable state (e.g. empty pool).
class StateError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical procedure failed or a fit degenerated.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace prtail

#pragma once

#include <stdexcept>
#include <string>

namespace scorenet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the offending 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, const std::string& source = {})
      : Error((source.empty() ? "" : source + ": ") +
              (line == 0 ? what : "line " + std::to_string(line) + ": " + what)),
        message_(what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

  /// Same error, attributed to a named source (usually a file path).
  ParseError in(const std::string& source) const { return ParseError(message_, line_, source); }

 private:
  std::string message_;
  std::size_t line_;
};

/// Arguments violate an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Computation cannot proceed (singular system, degenerate geometry, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace scorenet

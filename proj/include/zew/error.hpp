#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zew {

// Base of every error thrown by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on a domain value violated (empty word, double injection...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Value outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Operation called on an object that is not in the required state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed input data. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  // Same error with `prefix: ` in front of the message.
  static ParseError with_context(const std::string& prefix, const ParseError& inner) {
    return ParseError(prefix + ": " + inner.what(), inner.line(), 0);
  }

  std::size_t line() const noexcept { return line_; }

 private:
  ParseError(const std::string& full, std::size_t line, int) : Error(full), line_(line) {}

  std::size_t line_;
};

}  // namespace zew

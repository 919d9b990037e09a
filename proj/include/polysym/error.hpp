#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polysym {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A resource limit (coset count, element budget, face budget) was hit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

// An input violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A verification that must succeed for consistent inputs failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace polysym

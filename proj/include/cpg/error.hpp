#pragma once

#include <stdexcept>
#include <string>

namespace cpg {

// Base for every error raised by the library. Callers that only need to
// distinguish "our" failures from std ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidMessageError : public Error {
 public:
  using Error::Error;
};

class ControlViolationError : public Error {
 public:
  using Error::Error;
};

class WriteConflictError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class DegenerateRowError : public Error {
 public:
  DegenerateRowError(std::size_t row, const std::string& what)
      : Error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigMismatchError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpg

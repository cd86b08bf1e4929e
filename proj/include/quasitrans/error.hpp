#pragma once

#include <stdexcept>
#include <string>

namespace quasitrans {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  numerical = 3,
  io = 4,
};

/// Base exception for the library. The code maps one-to-one onto the C API
/// status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::invalid_argument, what) {}
};

/// A point or parameter lies outside the region where an operation is defined.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::domain, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::numerical, what) {}
};

}  // namespace quasitrans

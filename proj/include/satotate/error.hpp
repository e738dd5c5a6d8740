#pragma once

#include <stdexcept>
#include <string>

namespace satotate {

enum class ErrorKind {
  InvalidInput,
  NotFound,
  Unsupported,
  DescriptorInvalid,
  NumericFailure,
  BadReduction,
  DataInvalid,
  Parse,
  InsufficientData,
  BelowThreshold,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `kind()` drives the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace satotate

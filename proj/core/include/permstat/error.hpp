#pragma once

#include <stdexcept>
#include <string>

namespace permstat {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  EmptyInput,
  DegenerateVariance,
  Parse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can translate it into an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace permstat

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nudgelab {

enum class ErrorCode {
  Validation,
  Authentication,
  Authorization,
  NotFound,
  Conflict,
  Expired,
  Configuration,
  Degenerate,
  Io,
  Storage,
};

std::string_view to_string(ErrorCode code);

// All recoverable failures in the library surface as this exception; the
// code decides how the HTTP layer and the CLI translate it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nudgelab

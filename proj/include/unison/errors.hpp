#pragma once

#include <stdexcept>
#include <string>

namespace unison {

enum class ErrorCode {
  SizeTooSmall,
  IndexOutOfRange,
  RoleMismatch,
  GuardViolation,
  Deadlock,
  Overflow,
  ScriptViolation,
  TraceMissingEnabledSets,
  NoCycleDetected,
  InvariantViolation,
  InvalidParams,
  IoError,
  UsageError,
};

const char* error_code_name(ErrorCode code);

/// All failures raised by the simulator carry a machine-checkable code.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw SimError(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace unison

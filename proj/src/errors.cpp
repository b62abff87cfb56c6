#include "unison/errors.hpp"

namespace unison {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeTooSmall:
      return "SizeTooSmall";
    case ErrorCode::IndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::RoleMismatch:
      return "RoleMismatch";
    case ErrorCode::GuardViolation:
      return "GuardViolation";
    case ErrorCode::Deadlock:
      return "Deadlock";
    case ErrorCode::Overflow:
      return "Overflow";
    case ErrorCode::ScriptViolation:
      return "ScriptViolation";
    case ErrorCode::TraceMissingEnabledSets:
      return "TraceMissingEnabledSets";
    case ErrorCode::NoCycleDetected:
      return "NoCycleDetected";
    case ErrorCode::InvariantViolation:
      return "InvariantViolation";
    case ErrorCode::InvalidParams:
      return "InvalidParams";
    case ErrorCode::IoError:
      return "IoError";
    case ErrorCode::UsageError:
      return "UsageError";
  }
  return "UnknownError";
}

}  // namespace unison

#pragma once

#include <stdexcept>
#include <string>

namespace nonhom {

/// Error categories surfaced by the library. The CLI maps them to exit codes
/// and machine-readable error JSON.
enum class ErrorCode {
  EmptySupport,
  EmptyCube,
  EmptyFamily,
  NotNested,
  NotInSupport,
  CoincidentPoints,
  ZeroNorm,
  DegenerateCompanion,
  UnknownGenerator,
  InvalidInput,
  ValidationFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptySupport: return "empty_support";
    case ErrorCode::EmptyCube: return "empty_cube";
    case ErrorCode::EmptyFamily: return "empty_family";
    case ErrorCode::NotNested: return "not_nested";
    case ErrorCode::NotInSupport: return "not_in_support";
    case ErrorCode::CoincidentPoints: return "coincident_points";
    case ErrorCode::ZeroNorm: return "zero_norm";
    case ErrorCode::DegenerateCompanion: return "degenerate_companion";
    case ErrorCode::UnknownGenerator: return "unknown_generator";
    case ErrorCode::InvalidInput: return "invalid_input";
    case ErrorCode::ValidationFailure: return "validation_failure";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nonhom

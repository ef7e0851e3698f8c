#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opuc {

enum class ErrorCode {
  UnitModulusParameter,
  ModeViolation,
  EmptySequence,
  IndexOutOfRange,
  DegreeMismatch,
  ZeroArgument,
  NotAZero,
  MultipleZero,
  ZeroDenominator,
  SolverFailure,
  DimensionMismatch,
  InvalidRadii,
  InvalidEpsilon,
  PathAmbiguity,
  OnArcEndpoint,
  WrongRegime,
  RegimeViolation,
  InvalidArgument,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnitModulusParameter: return "UnitModulusParameter";
    case ErrorCode::ModeViolation: return "ModeViolation";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::NotAZero: return "NotAZero";
    case ErrorCode::MultipleZero: return "MultipleZero";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidRadii: return "InvalidRadii";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::PathAmbiguity: return "PathAmbiguity";
    case ErrorCode::OnArcEndpoint: return "OnArcEndpoint";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
/// `index()` carries the offending 1-based parameter index where one applies
/// (UnitModulusParameter, ModeViolation), otherwise 0.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int index = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  int index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace opuc

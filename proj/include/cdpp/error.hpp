#pragma once

#include <stdexcept>
#include <string>

namespace cdpp {

enum class ErrorCode {
  ParseError,
  NotSymmetric,
  NotPSD,
  NullMass,
  GridTooLarge,
  DegreeExceeded,
  NumericalResolutionExceeded,
  ArityMismatch,
  VariableClash,
  RankDeficient,
  TooLarge,
  Disconnected,
  OddVertexCount,
  DimensionMismatch,
  CostBudgetExceeded,
  DimensionBudgetExceeded,
  NonConvergence,
};

inline const char* error_code_name(ErrorCode c) noexcept {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NullMass: return "NullMass";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::DegreeExceeded: return "DegreeExceeded";
    case ErrorCode::NumericalResolutionExceeded: return "NumericalResolutionExceeded";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::VariableClash: return "VariableClash";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::OddVertexCount: return "OddVertexCount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CostBudgetExceeded: return "CostBudgetExceeded";
    case ErrorCode::DimensionBudgetExceeded: return "DimensionBudgetExceeded";
    case ErrorCode::NonConvergence: return "NonConvergence";
  }
  return "Unknown";
}

/// Domain error carrying a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace cdpp

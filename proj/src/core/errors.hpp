// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hom4 {

enum class ErrorCode {
  BadArgument = 1,
  NonZeroMean,
  GridMismatch,
  NotElliptic,
  SymmetryViolation,
  BadParameters,
  NoConvergence,
  SolenoidalityViolation,
  NotSolenoidal,
  UnsupportedOrder,
  PropertyViolation,
  Io,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-readable code. Every failure in the core
/// library is reported through this type so the C layer can map it to a
/// status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code),
        detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  /// Same code, message prefixed with `context`.
  Error within(const std::string& context) const { return Error(code_, context + ": " + detail_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadArgument: return "BadArgument";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SolenoidalityViolation: return "SolenoidalityViolation";
    case ErrorCode::NotSolenoidal: return "NotSolenoidal";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::PropertyViolation: return "PropertyViolation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hom4

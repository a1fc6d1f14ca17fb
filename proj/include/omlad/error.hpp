#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace omlad {

enum class ErrorCode {
  InvalidOrder,
  InvalidSeason,
  InvalidRate,
  InvalidThreshold,
  InvalidWarmup,
  InvalidStatsMode,
  NonFiniteInput,
  NotWarm,
  InsufficientWindow,
  AlphaOutOfRange,
  NTooSmall,
  NonMonotoneTick,
  MalformedRecord,
  LengthMismatch,
  Empty,
  NoPositives,
  DegenerateLabels,
  MissingColumn,
  ParseError,
  NonMonotoneTime,
  NonFiniteValue,
  RateOutOfRange,
  InvalidSpec,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidSeason: return "InvalidSeason";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidWarmup: return "InvalidWarmup";
    case ErrorCode::InvalidStatsMode: return "InvalidStatsMode";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NotWarm: return "NotWarm";
    case ErrorCode::InsufficientWindow: return "InsufficientWindow";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::NTooSmall: return "NTooSmall";
    case ErrorCode::NonMonotoneTick: return "NonMonotoneTick";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::RateOutOfRange: return "RateOutOfRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a stable machine-readable code. Data errors that refer
/// to an input file also carry the 1-based data row (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t row = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        row_(row) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t row() const noexcept { return row_; }

 private:
  ErrorCode code_;
  std::size_t row_;
};

}  // namespace omlad

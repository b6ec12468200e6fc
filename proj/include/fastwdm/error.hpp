#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fastwdm {

enum class ErrorCode {
  InvalidArgument,
  BerOutOfRange,
  EmptyList,
  NonPositiveRemainder,
  Unachievable,
  FrequencyOutOfRange,
  ModeUnsupported,
  UnknownNode,
  UnknownLink,
  NoWavelengthAvailable,
  UnknownMode,
  NotHalted,
  NotConfigured,
  LossOfSignal,
  UnknownMethod,
  BadRequest,
  Transport,
  ProbeFailed,
  MissingLink,
  DemandUnsatisfiable,
  MarginUnavailable,
  EmptySeries,
  InsufficientData,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fastwdm

#include "fastwdm/error.hpp"

#include <array>
#include <utility>

namespace fastwdm {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 25> kNames{{
    {ErrorCode::InvalidArgument, "InvalidArgument"},
    {ErrorCode::BerOutOfRange, "BerOutOfRange"},
    {ErrorCode::EmptyList, "EmptyList"},
    {ErrorCode::NonPositiveRemainder, "NonPositiveRemainder"},
    {ErrorCode::Unachievable, "Unachievable"},
    {ErrorCode::FrequencyOutOfRange, "FrequencyOutOfRange"},
    {ErrorCode::ModeUnsupported, "ModeUnsupported"},
    {ErrorCode::UnknownNode, "UnknownNode"},
    {ErrorCode::UnknownLink, "UnknownLink"},
    {ErrorCode::NoWavelengthAvailable, "NoWavelengthAvailable"},
    {ErrorCode::UnknownMode, "UnknownMode"},
    {ErrorCode::NotHalted, "NotHalted"},
    {ErrorCode::NotConfigured, "NotConfigured"},
    {ErrorCode::LossOfSignal, "LossOfSignal"},
    {ErrorCode::UnknownMethod, "UnknownMethod"},
    {ErrorCode::BadRequest, "BadRequest"},
    {ErrorCode::Transport, "Transport"},
    {ErrorCode::ProbeFailed, "ProbeFailed"},
    {ErrorCode::MissingLink, "MissingLink"},
    {ErrorCode::DemandUnsatisfiable, "DemandUnsatisfiable"},
    {ErrorCode::MarginUnavailable, "MarginUnavailable"},
    {ErrorCode::EmptySeries, "EmptySeries"},
    {ErrorCode::InsufficientData, "InsufficientData"},
    {ErrorCode::ParseError, "ParseError"},
    {ErrorCode::ConfigError, "ConfigError"},
}};

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace fastwdm

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "fastwdm/error.hpp"
#include "json.hpp"

namespace fastwdm {

enum class MessageKind { Request, Response, Error };

std::string_view to_string(MessageKind k) noexcept;

/// One newline-delimited JSON frame. `body` is the params object for a
/// request, the result for a response, and {code, message} for an error.
struct ProtocolMessage {
  std::int64_t id = 0;
  MessageKind kind = MessageKind::Request;
  std::string method;
  nlohmann::json body = nlohmann::json::object();

  static ProtocolMessage request(std::int64_t id, std::string method, nlohmann::json params);
  static ProtocolMessage response(const ProtocolMessage& req, nlohmann::json result);
  static ProtocolMessage error(std::int64_t id, std::string method, ErrorCode code, std::string message);

  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

/// Single line, no trailing newline.
std::string encode(const ProtocolMessage& m);
/// Throws ParseError for malformed JSON and BadRequest for a bad envelope.
ProtocolMessage decode(std::string_view line);

/// Rebuilds the Error carried by an error message.
Error to_error(const ProtocolMessage& m);

}  // namespace fastwdm

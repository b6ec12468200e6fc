#include "fastwdm/protocol.hpp"

namespace fastwdm {

std::string_view to_string(MessageKind k) noexcept {
  switch (k) {
    case MessageKind::Request: return "request";
    case MessageKind::Response: return "response";
    case MessageKind::Error: return "error";
  }
  return "request";
}

namespace {

const char* body_key(MessageKind k) {
  switch (k) {
    case MessageKind::Request: return "params";
    case MessageKind::Response: return "result";
    case MessageKind::Error: return "error";
  }
  return "params";
}

}  // namespace

ProtocolMessage ProtocolMessage::request(std::int64_t id, std::string method, nlohmann::json params) {
  if (params.is_null()) params = nlohmann::json::object();
  return {id, MessageKind::Request, std::move(method), std::move(params)};
}

ProtocolMessage ProtocolMessage::response(const ProtocolMessage& req, nlohmann::json result) {
  if (result.is_null()) result = nlohmann::json::object();
  return {req.id, MessageKind::Response, req.method, std::move(result)};
}

ProtocolMessage ProtocolMessage::error(std::int64_t id, std::string method, ErrorCode code, std::string message) {
  return {id, MessageKind::Error, std::move(method),
          nlohmann::json{{"code", std::string(to_string(code))}, {"message", std::move(message)}}};
}

std::string encode(const ProtocolMessage& m) {
  nlohmann::json j = {{"id", m.id}, {"kind", std::string(to_string(m.kind))}, {"method", m.method}};
  j[body_key(m.kind)] = m.body;
  return j.dump();
}

ProtocolMessage decode(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed frame: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "frame is not an object");
  ProtocolMessage m;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_number_integer()) throw Error(ErrorCode::BadRequest, "frame needs an integer id");
  m.id = id->get<std::int64_t>();
  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw Error(ErrorCode::BadRequest, "frame needs a kind");
  const auto k = kind->get<std::string>();
  if (k == "request") {
    m.kind = MessageKind::Request;
  } else if (k == "response") {
    m.kind = MessageKind::Response;
  } else if (k == "error") {
    m.kind = MessageKind::Error;
  } else {
    throw Error(ErrorCode::BadRequest, "unknown frame kind '" + k + "'");
  }
  const auto method = j.find("method");
  if (method == j.end() || !method->is_string()) throw Error(ErrorCode::BadRequest, "frame needs a method");
  m.method = method->get<std::string>();
  for (const auto& [key, v] : j.items()) {
    if (key != "id" && key != "kind" && key != "method" && key != body_key(m.kind))
      throw Error(ErrorCode::BadRequest, "unexpected field '" + key + "'");
  }
  const auto body = j.find(body_key(m.kind));
  m.body = body == j.end() ? nlohmann::json::object() : *body;
  if (!m.body.is_object()) throw Error(ErrorCode::BadRequest, std::string(body_key(m.kind)) + " must be an object");
  if (m.kind == MessageKind::Error) {
    if (!m.body.contains("code") || !m.body["code"].is_string() || !m.body.contains("message") ||
        !m.body["message"].is_string())
      throw Error(ErrorCode::BadRequest, "error frame needs code and message");
  }
  return m;
}

Error to_error(const ProtocolMessage& m) {
  const auto name = m.body.value("code", std::string("Transport"));
  const auto code = error_code_from_string(name).value_or(ErrorCode::Transport);
  return Error(code, m.body.value("message", std::string("remote error")));
}

}  // namespace fastwdm

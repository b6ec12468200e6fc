#include "fastwdm/agent.hpp"

#include "fastwdm/mode.hpp"

namespace fastwdm {

class Agent::Turn {
 public:
  explicit Turn(TicketLock& l) : lock_(l) {
    std::unique_lock g(lock_.mu);
    const auto ticket = lock_.next++;
    lock_.cv.wait(g, [&] { return lock_.serving == ticket; });
  }
  ~Turn() {
    {
      std::lock_guard g(lock_.mu);
      ++lock_.serving;
    }
    lock_.cv.notify_all();
  }
  Turn(const Turn&) = delete;
  Turn& operator=(const Turn&) = delete;

 private:
  TicketLock& lock_;
};

Agent::Agent(World& world, std::string mux_id) : world_(world), mux_id_(std::move(mux_id)) {
  const int n = world_.mux(mux_id_).trx_count;
  for (int i = 0; i < n; ++i) locks_.push_back(std::make_unique<TicketLock>());
}

Agent::TicketLock& Agent::lock_for(int trx) { return *locks_.at(static_cast<std::size_t>(trx)); }

int Agent::trx_param(const nlohmann::json& params) const {
  const auto it = params.find("trx");
  if (it == params.end() || !it->is_number_integer())
    throw Error(ErrorCode::BadRequest, "params.trx must be an integer");
  const int trx = it->get<int>();
  if (trx < 0 || trx >= static_cast<int>(locks_.size()))
    throw Error(ErrorCode::BadRequest, mux_id_ + " has no transceiver " + std::to_string(trx));
  return trx;
}

namespace {

double number_param(const nlohmann::json& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end() || !it->is_number()) throw Error(ErrorCode::BadRequest, std::string("params.") + key + " must be a number");
  return it->get<double>();
}

std::string string_param(const nlohmann::json& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end() || !it->is_string()) throw Error(ErrorCode::BadRequest, std::string("params.") + key + " must be a string");
  return it->get<std::string>();
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json Agent::dispatch(const std::string& method, const nlohmann::json& params) {
  if (method == "get_characteristics") return to_json(world_.characteristics(mux_id_));

  if (method == "configure") {
    const int trx = trx_param(params);
    const double f = number_param(params, "freq_thz");
    const std::string mode = string_param(params, "mode_id");
    Turn turn(lock_for(trx));
    const TrxEndpoint ep{mux_id_, trx};
    world_.configure(ep, f, mode);
    const auto st = world_.state(ep);
    return {{"trx", trx}, {"freq_thz", *st.freq_thz}, {"mode_id", *st.mode_id}, {"completed_at", st.busy_until}};
  }

  if (method == "admin_set") {
    const int trx = trx_param(params);
    const AdminState s = admin_state_from_string(string_param(params, "state"));
    Turn turn(lock_for(trx));
    world_.admin_set({mux_id_, trx}, s);
    return {{"trx", trx}, {"state", std::string(to_string(s))}};
  }

  if (method == "get_ber") {
    const int trx = trx_param(params);
    const double window = number_param(params, "window_s");
    if (!(window > 0.0)) throw Error(ErrorCode::BadRequest, "params.window_s must be > 0");
    Turn turn(lock_for(trx));
    const auto r = world_.measure({mux_id_, trx}, window);
    return {{"ber", r.ber}, {"window_s", r.window_s}, {"mode_id", r.mode_id}, {"freq_thz", r.freq_thz},
            {"timestamp", r.timestamp}};
  }

  if (method == "get_telemetry") {
    const int trx = trx_param(params);
    Turn turn(lock_for(trx));
    const auto r = world_.telemetry({mux_id_, trx});
    return {{"trx", trx},
            {"admin", std::string(to_string(r.state.admin))},
            {"freq_thz", optional_json(r.state.freq_thz)},
            {"mode_id", r.state.mode_id ? nlohmann::json(*r.state.mode_id) : nlohmann::json(nullptr)},
            {"gsnr_db", optional_json(r.gsnr_db)},
            {"timestamp", r.timestamp}};
  }

  throw Error(ErrorCode::UnknownMethod, "no method '" + method + "'");
}

ProtocolMessage Agent::handle(const ProtocolMessage& request) {
  if (request.kind != MessageKind::Request)
    return ProtocolMessage::error(request.id, request.method, ErrorCode::BadRequest, "expected a request frame");
  try {
    return ProtocolMessage::response(request, dispatch(request.method, request.body));
  } catch (const Error& e) {
    return ProtocolMessage::error(request.id, request.method, e.code(), e.detail());
  } catch (const std::exception& e) {
    return ProtocolMessage::error(request.id, request.method, ErrorCode::BadRequest, e.what());
  }
}

std::string Agent::handle_line(std::string_view line) {
  ProtocolMessage req;
  try {
    req = decode(line);
  } catch (const Error& e) {
    std::int64_t id = 0;
    std::string method;
    // Echo what can be salvaged from a malformed envelope.
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_object()) {
      if (j.contains("id") && j["id"].is_number_integer()) id = j["id"].get<std::int64_t>();
      if (j.contains("method") && j["method"].is_string()) method = j["method"].get<std::string>();
    }
    return encode(ProtocolMessage::error(id, method, e.code(), e.detail()));
  }
  return encode(handle(req));
}

}  // namespace fastwdm

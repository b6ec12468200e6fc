#include <atomic>
#include <random>
#include <thread>

#include "fastwdm/agent.hpp"
#include "fastwdm/mode.hpp"
#include "fastwdm/protocol.hpp"
#include "fastwdm/transport.hpp"
#include "support.hpp"

using namespace fastwdm;
using nlohmann::json;

TEST_CASE("characteristics JSON round trip") {
  const auto a = reference_catalog("A", 191.3, 196.1, 100);
  const auto j = to_json(a);
  CHECK(j["schema"] == 1);
  CHECK(j["freq_range_thz"] == json::array({191.3, 196.1}));
  const auto back = characteristics_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.mode("200G-DPQPSK-64GBd").required_gsnr.db() == 5.5);
  CHECK(back.mode("400G-DP16QAM-64GBd").snr_trx.db() == 17.51);
  CHECK_CODE(back.mode("x"), ErrorCode::UnknownMode);
}

TEST_CASE("characteristics validation") {
  auto j = to_json(reference_catalog("A", 191.3, 196.1, 100));
  auto bad = j;
  bad["extra"] = 1;
  CHECK_CODE(characteristics_from_json(bad), ErrorCode::ConfigError);
  bad = j;
  bad["freq_range_thz"] = {196.1, 191.3};
  CHECK_CODE(characteristics_from_json(bad), ErrorCode::ConfigError);
  bad = j;
  bad["modes"][1]["id"] = bad["modes"][0]["id"];
  CHECK_CODE(characteristics_from_json(bad), ErrorCode::ConfigError);
  bad = j;
  bad["modes"][1]["required_gsnr_db"] = 12.0;
  CHECK_CODE(characteristics_from_json(bad), ErrorCode::ConfigError);
  bad = j;
  bad["modes"][0]["line_rate_gbps"] = 0;
  CHECK_CODE(characteristics_from_json(bad), ErrorCode::ConfigError);
}

TEST_CASE("vendor grids are checked in absolute THz") {
  const auto b = reference_catalog("B", 191.15, 196.1, 50);
  CHECK(b.in_range(191.15));
  CHECK_FALSE(b.in_range(191.1));
  CHECK(b.on_grid(191.15));
  CHECK_FALSE(b.on_grid(191.175));
  const auto a = reference_catalog("A", 191.3, 196.1, 100);
  CHECK_FALSE(a.on_grid(191.15));
  CHECK(a.channel_frequency(1) == doctest::Approx(191.3));
  CHECK(b.channel_frequency(1) == doctest::Approx(191.15));
  CHECK_CODE(a.channel_frequency(0), ErrorCode::FrequencyOutOfRange);
}

TEST_CASE("pair back-to-back and common modes") {
  CHECK(pair_back_to_back(GsnrDb(17.0), GsnrDb(17.0)).db() == doctest::Approx(17.0));
  const double mixed = pair_back_to_back(GsnrDb(16.0), GsnrDb(18.0)).db();
  CHECK(mixed > 16.0);
  CHECK(mixed < 17.0);
  auto a = reference_catalog("A", 191.3, 196.1, 100);
  auto b = reference_catalog("B", 191.15, 196.1, 50);
  b.modes[0].snr_trx = GsnrDb(16.0);
  b.modes[0].required_gsnr = GsnrDb(10.5);
  const auto common = common_modes(a, b);
  REQUIRE(common.size() == 2);
  const auto& m = common[0].id == "400G-DP16QAM-64GBd" ? common[0] : common[1];
  CHECK(m.required_gsnr.db() == 10.5);
  CHECK(m.snr_trx.db() == doctest::Approx(pair_back_to_back(GsnrDb(17.51), GsnrDb(16.0)).db()));
  b.modes.pop_back();
  CHECK(common_modes(a, b).size() == 1);
}

TEST_CASE("protocol frames") {
  const auto req = ProtocolMessage::request(7, "configure", {{"trx", 0}});
  const auto line = encode(req);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(json::parse(line) == json{{"id", 7}, {"kind", "request"}, {"method", "configure"}, {"params", {{"trx", 0}}}});
  CHECK(decode(line) == req);
  const auto resp = ProtocolMessage::response(req, {{"ok", true}});
  CHECK(json::parse(encode(resp)).contains("result"));
  const auto err = ProtocolMessage::error(7, "configure", ErrorCode::NotHalted, "busy");
  CHECK(json::parse(encode(err))["error"] == json{{"code", "NotHalted"}, {"message", "busy"}});
  const auto e = to_error(decode(encode(err)));
  CHECK(e.code() == ErrorCode::NotHalted);
  CHECK(e.detail() == "busy");
}

TEST_CASE("strict decoding") {
  CHECK_CODE(decode("{"), ErrorCode::ParseError);
  CHECK_CODE(decode("[]"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"kind":"request","method":"x"})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1.5,"kind":"request","method":"x"})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1,"kind":"push","method":"x"})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1,"kind":"request"})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1,"kind":"request","method":"x","result":{}})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1,"kind":"request","method":"x","params":[1]})"), ErrorCode::BadRequest);
  CHECK_CODE(decode(R"({"id":1,"kind":"error","method":"x","error":{"code":"X"}})"), ErrorCode::BadRequest);
  CHECK(decode(R"({"id":1,"kind":"request","method":"x"})").body == json::object());
}

TEST_CASE("round trip of generated frames") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, 4);
  for (int i = 0; i < 2000; ++i) {
    json body = json::object();
    for (int k = 0; k < pick(rng); ++k) {
      switch (pick(rng)) {
        case 0: body["n" + std::to_string(k)] = std::uniform_real_distribution<double>(-1e9, 1e9)(rng); break;
        case 1: body["s" + std::to_string(k)] = std::string("\xe2\x9c\x93 \"q\" \\ ") + std::to_string(i); break;
        case 2: body["a" + std::to_string(k)] = json::array({1, nullptr, false}); break;
        case 3: body["o" + std::to_string(k)] = {{"x", {{"y", i}}}}; break;
        default: body["b" + std::to_string(k)] = nullptr;
      }
    }
    const auto m = i % 2 ? ProtocolMessage::request(i, "m", body)
                         : ProtocolMessage::response(ProtocolMessage::request(i, "m", {}), body);
    CHECK(decode(encode(m)) == m);
  }
}

namespace {

struct Bench {
  Scenario sc = test::bundled("short.json");
  Testbed tb{sc};
  Agent& agent = tb.agent("MX-S1");

  json call(const std::string& method, json params) {
    const auto reply = agent.handle(ProtocolMessage::request(1, method, std::move(params)));
    if (reply.kind == MessageKind::Error) throw to_error(reply);
    return reply.body;
  }
};

}  // namespace

TEST_CASE("agent answers characteristics byte-stably") {
  Bench b;
  const auto first = b.call("get_characteristics", json::object()).dump();
  CHECK(b.call("get_characteristics", json::object()).dump() == first);
  CHECK(characteristics_from_json(json::parse(first)).vendor == "A");
}

TEST_CASE("agent state machine") {
  Bench b;
  auto& world = b.tb.world();
  const json cfg = {{"trx", 0}, {"freq_thz", 191.5}, {"mode_id", "400G-DP16QAM-64GBd"}};
  const auto ack = b.call("configure", cfg);
  CHECK(ack["completed_at"] == 60.0);
  CHECK(world.clock().now() == 60.0);
  b.call("admin_set", {{"trx", 0}, {"state", "up"}});
  CHECK_CODE(b.call("configure", cfg), ErrorCode::NotHalted);
  b.call("admin_set", {{"trx", 0}, {"state", "halted"}});
  CHECK_CODE(b.call("configure", {{"trx", 0}, {"freq_thz", 197.0}, {"mode_id", "400G-DP16QAM-64GBd"}}),
             ErrorCode::FrequencyOutOfRange);
  CHECK_CODE(b.call("configure", {{"trx", 0}, {"freq_thz", 191.55}, {"mode_id", "400G-DP16QAM-64GBd"}}),
             ErrorCode::FrequencyOutOfRange);
  CHECK_CODE(b.call("configure", {{"trx", 0}, {"freq_thz", 191.5}, {"mode_id", "x"}}), ErrorCode::UnknownMode);
  CHECK_CODE(b.call("configure", {{"trx", 9}, {"freq_thz", 191.5}, {"mode_id", "x"}}), ErrorCode::BadRequest);
  CHECK_CODE(b.call("admin_set", {{"trx", 0}, {"state", "on"}}), ErrorCode::BadRequest);
  CHECK_CODE(b.call("get_ber", {{"trx", 0}, {"window_s", 0}}), ErrorCode::BadRequest);
  CHECK_CODE(b.call("get_ber", {{"trx", 1}, {"window_s", 10}}), ErrorCode::NotConfigured);
  CHECK_CODE(b.call("reboot", json::object()), ErrorCode::UnknownMethod);

  const auto tel = b.call("get_telemetry", {{"trx", 0}});
  CHECK(tel["admin"] == "halted");
  CHECK(tel["freq_thz"] == 191.5);
  CHECK(tel["gsnr_db"].is_null());
}

TEST_CASE("lit connection reports BER, loss of signal otherwise") {
  Bench b;
  auto& world = b.tb.world();
  const TrxEndpoint a{"MX-S1", 0}, z{"MX-S2", 0};
  world.connect(a, z, world.line().make_path({"AAL1", "CL", "AAL2"}, "S1"));
  for (const auto& ep : {a, z}) world.configure(ep, 191.5, "400G-DP16QAM-64GBd");
  world.admin_set(a, AdminState::Up);
  CHECK_CODE(b.call("get_ber", {{"trx", 0}, {"window_s", 20}}), ErrorCode::LossOfSignal);
  world.admin_set(z, AdminState::Up);
  const double before = world.clock().now();
  const auto r = b.call("get_ber", {{"trx", 0}, {"window_s", 20}});
  CHECK(r["ber"].get<double>() > 0.0);
  CHECK(r["mode_id"] == "400G-DP16QAM-64GBd");
  CHECK(world.clock().now() == before + 20.0);
  const auto tel = b.call("get_telemetry", {{"trx", 0}});
  CHECK(tel["gsnr_db"].get<double>() == doctest::Approx(16.0).epsilon(0.02));

  world.admin_set(z, AdminState::Halted);
  world.configure(z, 192.1, "400G-DP16QAM-64GBd");
  world.admin_set(z, AdminState::Up);
  CHECK_CODE(b.call("get_ber", {{"trx", 0}, {"window_s", 20}}), ErrorCode::LossOfSignal);
}

TEST_CASE("bad frames still get an error reply with the id") {
  Bench b;
  const auto reply = decode(b.agent.handle_line(R"({"id":5,"kind":"request","method":"get_ber","bogus":1})"));
  CHECK(reply.kind == MessageKind::Error);
  CHECK(reply.id == 5);
  CHECK(reply.body["code"] == "BadRequest");
  const auto junk = decode(b.agent.handle_line("not json"));
  CHECK(junk.body["code"] == "ParseError");
}

TEST_CASE("requests on one transceiver are served in arrival order") {
  Bench b;
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      const auto r = b.agent.handle(ProtocolMessage::request(
          i, "admin_set", {{"trx", 1}, {"state", i % 2 ? "up" : "halted"}}));
      if (r.kind == MessageKind::Response) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 8);
}

TEST_CASE("TCP transport carries the same protocol") {
  Bench b;
  AgentServer server(b.agent);
  REQUIRE(server.port() != 0);
  AgentClient client(std::make_unique<TcpTransport>("127.0.0.1", server.port()));
  CHECK(client.characteristics().vendor == "A");
  client.configure(0, 192.1, "200G-DPQPSK-64GBd");
  client.admin_set(0, AdminState::Up);
  const auto tel = client.telemetry(0);
  CHECK(tel["freq_thz"] == 192.1);
  CHECK(tel["admin"] == "up");
  try {
    client.configure(0, 191.5, "200G-DPQPSK-64GBd");
    FAIL("expected NotHalted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHalted);
    CHECK(e.detail().find("NotHalted") == std::string::npos);
  }
  server.stop();
  CHECK_CODE(client.characteristics(), ErrorCode::Transport);
}

TEST_CASE("unreachable agents surface as transport errors") {
  AgentClient client(std::make_unique<UnreachableTransport>("MX-X"));
  CHECK_CODE(client.characteristics(), ErrorCode::Transport);
  CHECK_CODE(AgentClient(std::make_unique<TcpTransport>("127.0.0.1", 1)).characteristics(), ErrorCode::Transport);
}

#include <fstream>

#include "fastwdm/report.hpp"
#include "fastwdm/scenario.hpp"
#include "support.hpp"

using namespace fastwdm;
using nlohmann::json;

namespace {

json raw(const char* name) {
  std::ifstream in(bundled_scenario_dir() / name);
  return json::parse(in);
}

std::string config_error(const json& j) {
  try {
    parse_scenario(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.detail();
  }
  return "";
}

}  // namespace

TEST_CASE("bundled scenarios load") {
  for (const char* name : {"short.json", "long.json"}) {
    const auto sc = test::bundled(name);
    CHECK(sc.links.size() == 3);
    CHECK(sc.muxes.size() == 4);
    CHECK(sc.request.has_value());
    CHECK(sc.graph.role("P1") == NodeRole::Pop);
  }
}

TEST_CASE("strict parsing") {
  auto j = raw("short.json");
  j["surprise"] = 1;
  CHECK(config_error(j).find("surprise") != std::string::npos);

  j = raw("short.json");
  j["links"][0]["a"] = "NOWHERE";
  CHECK(config_error(j).find("NOWHERE") != std::string::npos);

  j = raw("short.json");
  j["links"][1]["kind"] = "XL";
  CHECK_FALSE(config_error(j).empty());

  j = raw("short.json");
  j["schema"] = 2;
  CHECK(config_error(j).find("schema") != std::string::npos);

  j = raw("short.json");
  j["muxponders"][0]["vendor"] = "Z";
  CHECK(config_error(j).find("unknown vendor") != std::string::npos);

  j = raw("short.json");
  j["nodes"].push_back(j["nodes"][0]);
  CHECK(config_error(j).find("duplicate node") != std::string::npos);

  j = raw("short.json");
  j["links"][0]["fluctuation"]["sigma_db"] = -1;
  CHECK_FALSE(config_error(j).empty());

  CHECK_CODE(load_scenario("/nonexistent/x.json"), ErrorCode::ConfigError);
}

TEST_CASE("standalone probe sees the calibration target") {
  const auto sc = test::bundled("short.json");
  Testbed tb(sc);
  const auto r = tb.provisioner().probe_link("AAL2");
  CHECK(r.raw_gsnr_db < r.probe_snr_trx_db);
  CHECK(r.line_gsnr_db == doctest::Approx(27.2).epsilon(0.1 / 27.2));
  CHECK(tb.ledger().records().size() == 1);
  CHECK_CODE(tb.provisioner().probe_link("nope"), ErrorCode::UnknownLink);
}

TEST_CASE("runs are reproducible") {
  const auto sc = test::bundled("long.json");
  auto once = [&] {
    Testbed tb(sc);
    return to_json(tb.provisioner().provision(*sc.request));
  };
  auto a = once(), b = once();
  a.erase("meta");
  b.erase("meta");
  CHECK(a == b);

  auto other = sc;
  other.seed = 2;
  Testbed tb(other);
  auto c = to_json(tb.provisioner().provision(*other.request));
  c.erase("meta");
  CHECK(c != a);
}

TEST_CASE("agents can be served over TCP") {
  const auto sc = test::bundled("short.json");
  Testbed tb(sc);
  const auto ports = tb.serve_over_tcp();
  CHECK(ports.size() == 4);
  const auto rep = tb.provisioner().provision(*sc.request);
  REQUIRE(rep.ok());
  CHECK(rep.timing.total_s == doctest::Approx(351.0));
  CHECK_CODE(tb.agent("MX-Z"), ErrorCode::UnknownNode);
}

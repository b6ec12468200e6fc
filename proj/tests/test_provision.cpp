#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "fastwdm/provision.hpp"
#include "fastwdm/report.hpp"
#include "support.hpp"

using namespace fastwdm;

namespace {

LinkGsnrRecord rec(std::string id, double line, double freq = 191.5) {
  LinkGsnrRecord r;
  r.link_id = std::move(id);
  r.line_gsnr_db = line;
  r.probe_freq_thz = freq;
  return r;
}

TransmissionMode mode(std::string id, Modulation m, double rate, double b2b, double req) {
  return {std::move(id), m, 64.0, rate, GsnrDb(b2b), GsnrDb(req)};
}

std::function<std::vector<double>(int)> first_fit() {
  return [](int n) {
    const std::vector<double> all{191.5, 194.6, 192.1, 193.3, 196.0};
    if (n > 5) throw Error(ErrorCode::NoWavelengthAvailable, "only 5 channels");
    return std::vector<double>(all.begin(), all.begin() + n);
  };
}

}  // namespace

TEST_CASE("end-to-end estimate composes reciprocally") {
  const std::vector<LinkGsnrRecord> rs{rec("A", 23.0), rec("C", 24.0), rec("B", 27.0)};
  const auto ete = estimate_ete(rs, {"A", "C", "B"}, GsnrDb(17.51));
  CHECK(ete.db() == doctest::Approx(combine_inverse({GsnrDb(17.51), GsnrDb(23.0), GsnrDb(24.0), GsnrDb(27.0)}).db()));
  CHECK(ete.db() < 17.51);
  CHECK_CODE(estimate_ete(rs, {"A", "Z"}, GsnrDb(17.51)), ErrorCode::MissingLink);

  std::vector<LinkGsnrRecord> newer = rs;
  newer.push_back(rec("A", 30.0));
  CHECK(estimate_ete(newer, {"A"}, GsnrDb(17.0)).db() > estimate_ete(rs, {"A"}, GsnrDb(17.0)).db());

  const auto clean = estimate_ete({rec("A", std::numeric_limits<double>::infinity())}, {"A"}, GsnrDb(17.0));
  CHECK(clean.db() == doctest::Approx(17.0));
}

TEST_CASE("tilt projection") {
  const auto r = rec("A", 23.0, 191.5);
  CHECK(project_line_gsnr(r, 191.5, -0.05) == 23.0);
  CHECK(project_line_gsnr(r, 194.6, -0.05) == doctest::Approx(23.0 - 0.155));
  const auto flat = estimate_ete({r}, {"A"}, GsnrDb::noise_free(), 194.6);
  const auto tilted = estimate_ete({r}, {"A"}, GsnrDb::noise_free(), 194.6, {{"A", -0.05}});
  CHECK(flat.db() == doctest::Approx(23.0));
  CHECK(tilted.db() == doctest::Approx(23.0 - 0.155));
}

TEST_CASE("plan selection prefers fewer channels, then margin") {
  PlanInputs in;
  in.demand_gbps = 400.0;
  in.links = {"A"};
  in.records = {rec("A", 25.0)};
  in.modes = {mode("qpsk", Modulation::QPSK, 200.0, 17.1, 5.5), mode("16qam", Modulation::QAM16, 400.0, 17.51, 10.3)};
  in.required_margin_db = 0.65;
  auto plan = select_plan(in, first_fit());
  REQUIRE(plan.size() == 1);
  CHECK(plan[0].mode.id == "16qam");
  CHECK(plan[0].freq_thz == 191.5);
  CHECK(plan[0].secured_margin_db == doctest::Approx(plan[0].est_gsnr_db - 10.3));

  in.records = {rec("A", 11.5)};
  plan = select_plan(in, first_fit());
  REQUIRE(plan.size() == 2);
  CHECK(plan[0].mode.id == "qpsk");
  CHECK(plan[1].freq_thz == 194.6);

  in.modes.push_back(mode("qpsk-b", Modulation::QPSK, 200.0, 16.0, 5.5));
  CHECK(select_plan(in, first_fit())[0].mode.id == "qpsk");

  in.operational_margin_db = 10.0;
  CHECK_CODE(select_plan(in, first_fit()), ErrorCode::DemandUnsatisfiable);
  in.operational_margin_db = 0.0;
  in.demand_gbps = 1200.0;
  CHECK_CODE(select_plan(in, first_fit()), ErrorCode::DemandUnsatisfiable);
  in.modes.clear();
  CHECK_CODE(select_plan(in, first_fit()), ErrorCode::DemandUnsatisfiable);
  in.demand_gbps = 0.0;
  CHECK_CODE(select_plan(in, first_fit()), ErrorCode::InvalidArgument);
}

TEST_CASE("shortfall is reported") {
  PlanInputs in;
  in.demand_gbps = 400.0;
  in.links = {"A"};
  in.records = {rec("A", 11.0)};
  in.modes = {mode("16qam", Modulation::QAM16, 400.0, 17.51, 10.3)};
  try {
    select_plan(in, first_fit());
    FAIL("expected DemandUnsatisfiable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DemandUnsatisfiable);
    CHECK(e.detail().find("short by") != std::string::npos);
  }
}

TEST_CASE("request validation") {
  CHECK_CODE((ProvisioningRequest{"S1", "S2", 0.0, 0.0}.validate()), ErrorCode::InvalidArgument);
  CHECK_CODE((ProvisioningRequest{"S1", "S2", 400.0, -1.0}.validate()), ErrorCode::InvalidArgument);
  CHECK_CODE((ProvisioningRequest{"", "S2", 400.0, 0.0}.validate()), ErrorCode::InvalidArgument);
  CHECK_NOTHROW((ProvisioningRequest{"S1", "S2", 400.0, 0.0}.validate()));
}

TEST_CASE("margin table") {
  const auto t = MarginTable::reference();
  CHECK_NOTHROW(t.validate());
  CHECK(t.required_margin(50.0) == 0.65);
  CHECK(t.required_margin(100.0) == 0.65);
  CHECK(t.required_margin(120.0) == 0.43);
  CHECK(t.required_margin(162.0) == 0.69);
  CHECK_CODE(t.required_margin(200.5), ErrorCode::MarginUnavailable);
  CHECK_CODE(t.required_margin(-1.0), ErrorCode::InvalidArgument);
  CHECK_CODE(MarginTable({{100, 0.6, 0.05, 0.7}}).validate(), ErrorCode::ConfigError);
  CHECK_CODE(MarginTable({{150, 0.6, 0.05, 0.65}, {100, 0.1, 0.1, 0.2}}).validate(), ErrorCode::ConfigError);
  CHECK_CODE(MarginTable(std::vector<MarginRow>{}).validate(), ErrorCode::ConfigError);
  const auto back = margin_table_from_json(to_json(t));
  CHECK(back.rows().size() == 3);
  CHECK(back.required_margin(180.0) == t.required_margin(180.0));
}

TEST_CASE("ledger records round trip through JSON lines") {
  LinkGsnrRecord r = rec("CL", std::numeric_limits<double>::infinity());
  r.probe_mode_id = "200G-DPQPSK-64GBd";
  r.probe_modulation = Modulation::QPSK;
  r.ber = 1.5e-4;
  r.raw_gsnr_db = 12.1;
  r.probe_snr_trx_db = 17.1;
  r.timestamp = 351.0;
  r.fallback = true;
  CHECK(db_to_json(std::numeric_limits<double>::infinity()) == "+inf");
  CHECK(db_to_json(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(record_from_json(to_json(r)) == r);
  CHECK_CODE(db_from_json("inf"), ErrorCode::ParseError);
  CHECK_CODE(record_from_json({{"link_id", "x"}}), ErrorCode::ParseError);

  const auto dir = std::filesystem::temp_directory_path() / "fastwdm_ledger_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto file = dir / "ledger.jsonl";
  {
    LinkLedger l(file);
    l.append(rec("A", 23.0));
    l.append(r);
  }
  LinkLedger again(file);
  REQUIRE(again.records().size() == 2);
  CHECK(again.records()[1] == r);
  CHECK(again.latest("CL")->fallback);
  CHECK_FALSE(again.latest("nope").has_value());
  CHECK(again.fresh("CL", 400.0, 3600.0).has_value());
  CHECK_FALSE(again.fresh("CL", 351.0 + 3600.0, 3600.0).has_value());

  std::ofstream(dir / "bad.jsonl") << "{\"link_id\":\"A\"}\nnot json\n";
  CHECK_CODE(LinkLedger(dir / "bad.jsonl"), ErrorCode::ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("short route provisions one 400G channel") {
  const auto sc = test::bundled("short.json");
  Testbed tb(sc);
  const auto rep = tb.provisioner().provision(*sc.request);
  REQUIRE(rep.ok());
  REQUIRE(rep.channels.size() == 1);
  const auto& c = rep.channels[0];
  CHECK(c.modulation == Modulation::QAM16);
  CHECK(c.est_gsnr_db == doctest::Approx(15.47).epsilon(0.01));
  CHECK(c.error_db <= 0.7);
  CHECK(c.measured_gsnr_db > c.est_gsnr_db);
  CHECK(rep.timing.total_s == doctest::Approx(351.0));
  CHECK(rep.timing.design_s < 1.0);
  CHECK(rep.links.size() == 3);
  for (const auto& u : rep.links) CHECK_FALSE(u.reused);

  SUBCASE("a second request reuses fresh probes") {
    auto second = *sc.request;
    second.demand_gbps = 200.0;
    const auto again = tb.provisioner().provision(second);
    REQUIRE(again.ok());
    CHECK(again.timing.probe_s == 0.0);
    for (const auto& u : again.links) CHECK(u.reused);
    CHECK(again.channels[0].freq_thz != c.freq_thz);
  }
}

TEST_CASE("long route falls back to QPSK on the core link") {
  const auto sc = test::bundled("long.json");
  Testbed tb(sc);
  const auto rep = tb.provisioner().provision(*sc.request);
  REQUIRE(rep.ok());
  REQUIRE(rep.channels.size() == 2);
  for (const auto& c : rep.channels) CHECK(c.modulation == Modulation::QPSK);
  CHECK(rep.channels[0].freq_thz == 191.5);
  CHECK(rep.channels[1].freq_thz == 194.6);
  bool cl_fallback = false;
  for (const auto& u : rep.links)
    if (u.record.link_id == "CL") cl_fallback = u.record.fallback;
  CHECK(cl_fallback);
  CHECK(rep.timing.total_s == doctest::Approx(441.0));
  const auto j = to_json(rep);
  CHECK(j["status"] == "ok");
  CHECK(render_table(rep).find("QPSK") != std::string::npos);
}

TEST_CASE("failures map to report status") {
  const auto sc = test::bundled("short.json");
  {
    Testbed tb(sc);
    tb.make_unreachable("MX-S1");
    CHECK(tb.provisioner().provision(*sc.request).status == "Transport");
  }
  {
    Testbed tb(sc);
    tb.make_unreachable("MX-P1");
    const auto rep = tb.provisioner().provision(*sc.request);
    CHECK(rep.status == "Transport");
    CHECK_CODE(tb.provisioner().probe_link("AAL1"), ErrorCode::Transport);
  }
  {
    Testbed tb(sc);
    auto req = *sc.request;
    req.demand_gbps = 4000.0;
    CHECK(tb.provisioner().provision(req).status == "DemandUnsatisfiable");
    req.dst = "P1";
    CHECK_FALSE(tb.provisioner().provision(req).ok());
    req.demand_gbps = -1.0;
    CHECK(tb.provisioner().provision(req).status == "InvalidArgument");
  }
}

TEST_CASE("unreadable probe is reported as ProbeFailed") {
  auto sc = test::bundled("long.json");
  sc.provisioner.probe.ber_ceiling = 1e-9;
  Testbed tb(sc);
  CHECK_CODE(tb.provisioner().probe_link("CL"), ErrorCode::ProbeFailed);
  CHECK(tb.provisioner().provision(*sc.request).status == "ProbeFailed");
}

TEST_CASE("required margin covers a pessimistic back-to-back error") {
  for (const char* name : {"short.json", "long.json"}) {
    auto sc = test::bundled(name);
    for (auto& m : sc.muxes)
      for (const auto& mode : m.characteristics.modes) m.b2b_offset_db[mode.id] = -0.4;
    Testbed tb(sc);
    const auto rep = tb.provisioner().provision(*sc.request);
    REQUIRE(rep.ok());
    for (const auto& c : rep.channels) {
      CHECK(c.measured_gsnr_db > c.required_gsnr_db + rep.required_margin_db);
      CHECK(c.est_gsnr_db - c.measured_gsnr_db <= rep.required_margin_db);
    }
  }
}

TEST_CASE("better links never make the plan worse") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> g(9.0, 30.0), up(0.0, 5.0);
  std::uniform_int_distribution<int> pick(0, 2);
  PlanInputs in;
  in.demand_gbps = 400.0;
  in.links = {"A", "C", "B"};
  in.modes = {mode("qpsk", Modulation::QPSK, 200.0, 17.1, 5.5), mode("16qam", Modulation::QAM16, 400.0, 17.51, 10.3)};
  in.tilts = {{"A", -0.02}, {"C", -0.045}, {"B", 0.0}};
  in.required_margin_db = 0.43;
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    in.records = {rec("A", g(rng)), rec("C", g(rng)), rec("B", g(rng))};
    std::vector<PlannedChannel> before;
    try {
      before = select_plan(in, first_fit());
    } catch (const Error&) {
      continue;
    }
    auto better = in;
    better.records[static_cast<std::size_t>(pick(rng))].line_gsnr_db += up(rng);
    const auto after = select_plan(better, first_fit());
    CHECK(after.size() <= before.size());
    if (after.size() == before.size()) {
      double wb = 1e9, wa = 1e9;
      for (const auto& c : before) wb = std::min(wb, c.secured_margin_db);
      for (const auto& c : after) wa = std::min(wa, c.secured_margin_db);
      CHECK(wa >= wb - 1e-12);
    }
    ++compared;
  }
  CHECK(compared > 100);
}

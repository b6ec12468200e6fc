#include <chrono>

#include "fastwdm/clock.hpp"
#include "fastwdm/world.hpp"
#include "support.hpp"

using namespace fastwdm;

TEST_CASE("virtual clock lanes") {
  VirtualClock c;
  c.advance(5.0);
  CHECK(c.now() == 5.0);
  c.advance_lane("a", 10.0);
  CHECK(c.now() == 15.0);
  {
    ParallelRegion r(c);
    CHECK(c.in_parallel());
    c.advance_lane("a", 60.0);
    c.advance_lane("b", 60.0);
    c.advance_lane("a", 20.0);
    CHECK(c.lane_now("a") == 95.0);
    CHECK(c.lane_now("b") == 75.0);
    CHECK(c.now() == 15.0);
  }
  CHECK_FALSE(c.in_parallel());
  CHECK(c.now() == 95.0);
  {
    ParallelRegion r(c);
    c.advance_lane("a", 10.0);
    c.advance_lanes("a", "b", 5.0);
    CHECK(c.lanes_now("a", "b") == 110.0);
  }
  CHECK(c.now() == 110.0);
  CHECK_CODE(c.advance(-1.0), ErrorCode::InvalidArgument);
}

TEST_CASE("realtime mode paces wall time") {
  VirtualClock c(ClockMode::Realtime, 1e-3);
  const auto t0 = std::chrono::steady_clock::now();
  c.advance(50.0);
  const auto dt = std::chrono::steady_clock::now() - t0;
  CHECK(dt >= std::chrono::milliseconds(45));
  CHECK(c.now() == 50.0);
}

namespace {

struct Fixture {
  Scenario sc = test::bundled("short.json");
  Testbed tb{sc};
  World& w = tb.world();
  TrxEndpoint a{"MX-S1", 0}, z{"MX-S2", 0};

  void light(double thz = 191.5, const char* mode = "400G-DP16QAM-64GBd") {
    w.connect(a, z, w.line().make_path({"AAL1", "CL", "AAL2"}, "S1"));
    {
      ParallelRegion r(w.clock());
      w.configure(a, thz, mode);
      w.configure(z, thz, mode);
    }
    w.admin_set(a, AdminState::Up);
    w.admin_set(z, AdminState::Up);
  }
};

}  // namespace

TEST_CASE("parallel configuration costs one transition") {
  Fixture f;
  f.light();
  CHECK(f.w.clock().now() == 60.0);
  CHECK(f.w.state(f.a).configured());
  CHECK(f.w.state(f.z).admin == AdminState::Up);
}

TEST_CASE("measurement follows the connection truth") {
  Fixture f;
  f.light();
  const auto r = f.w.measure(f.z, 20.0);
  CHECK(f.w.clock().now() == 80.0);
  CHECK(r.window_s == 20.0);
  CHECK(r.freq_thz == 191.5);
  const double g = gsnr_from_ber(Ber(r.ber), Modulation::QAM16).db();
  CHECK(g == doctest::Approx(15.99).epsilon(0.01));
  CHECK(f.w.peer(f.a)->mux == "MX-S2");
  CHECK(f.w.connection_gsnr(f.z, 100.0).has_value());
}

TEST_CASE("loss of signal conditions") {
  Fixture f;
  CHECK_CODE(f.w.measure(f.z, 10.0), ErrorCode::NotConfigured);
  f.light();
  f.w.disconnect(f.a);
  CHECK_FALSE(f.w.peer(f.z).has_value());
  CHECK_CODE(f.w.measure(f.z, 10.0), ErrorCode::LossOfSignal);
  CHECK_CODE(f.w.connect(f.a, f.a, {}), ErrorCode::BadRequest);
  f.w.connect(f.a, f.z, f.w.line().make_path({"AAL1", "CL", "AAL2"}, "S1"));
  CHECK_CODE(f.w.connect(f.a, {"MX-S2", 1}, {}), ErrorCode::BadRequest);
  f.w.admin_set(f.z, AdminState::Halted);
  f.w.configure(f.z, 191.5, "200G-DPQPSK-64GBd");
  f.w.admin_set(f.z, AdminState::Up);
  CHECK_CODE(f.w.measure(f.z, 10.0), ErrorCode::LossOfSignal);
}

TEST_CASE("unknown endpoints") {
  Fixture f;
  CHECK_CODE(f.w.state({"MX-S9", 0}), ErrorCode::UnknownNode);
  CHECK_CODE(f.w.state({"MX-S1", 7}), ErrorCode::BadRequest);
  CHECK(f.w.muxes_at("S1") == std::vector<std::string>{"MX-S1"});
  CHECK(f.w.mux_ids().size() == 4);
  CHECK(admin_state_from_string("up") == AdminState::Up);
  CHECK_CODE(admin_state_from_string("down"), ErrorCode::BadRequest);
}

TEST_CASE("declared versus true back-to-back offset") {
  auto sc = test::bundled("short.json");
  for (auto& m : sc.muxes) m.b2b_offset_db["400G-DP16QAM-64GBd"] = -1.0;
  Testbed tb(sc);
  auto& w = tb.world();
  const auto declared = w.characteristics("MX-S1").mode("400G-DP16QAM-64GBd").snr_trx.db();
  CHECK(w.true_pair_b2b({"MX-S1", 0}, {"MX-S2", 0}, "400G-DP16QAM-64GBd", 0.0).db() ==
        doctest::Approx(declared - 1.0).epsilon(1e-3));
}

#include <cmath>
#include <numeric>

#include "fastwdm/clock.hpp"
#include "fastwdm/linesim.hpp"
#include "fastwdm/mode.hpp"
#include "support.hpp"

using namespace fastwdm;

namespace {

OpticalLink two_span_link() {
  OpticalLink l;
  l.id = "L";
  l.a_node = "A";
  l.z_node = "B";
  Stage s1;
  s1.span = {80.0, 0.2, 0.0, 2.5e-5};
  s1.amp = Amplifier{16.0, 5.0, 0.0, 191.5};
  Stage s2;
  s2.span = {60.0, 0.25, 1.0, 2.5e-5};
  s2.amp = Amplifier{16.0, 5.5, 0.1, 191.5};
  l.stages = {s1, s2};
  return l;
}

OpticalLink simple(std::string id, std::string a, std::string z, double target_db, double sigma = 0.0) {
  OpticalLink l;
  l.id = std::move(id);
  l.a_node = std::move(a);
  l.z_node = std::move(z);
  l.kind = LinkKind::CL;
  Stage s;
  s.span = {40.0, 0.25, 5.0, 0.0};
  s.amp = Amplifier{15.0, 5.0, 0.0, 191.5};
  l.stages = {s};
  l.fluctuation = {sigma, 600.0, 11};
  return calibrate_link(l, GsnrDb(target_db), 191.5, 4.0);
}

}  // namespace

TEST_CASE("ASE and NLI against the high-precision oracle") {
  const auto l = two_span_link();
  CHECK(ase_snr(l, 193.1, 1.0).db() == doctest::Approx(27.79467421817983).epsilon(1e-12));
  CHECK(nli_snr(l, 1.0).db() == doctest::Approx(41.010299956639812).epsilon(1e-12));
  CHECK(static_link_gsnr(l, 193.1, 1.0).db() == doctest::Approx(27.592341632266208).epsilon(1e-12));
  CHECK(l.length_km() == 140.0);
  CHECK(l.amplifier_count() == 2);
}

TEST_CASE("ASE grows with gain and noise figure") {
  auto l = two_span_link();
  const double base = ase_snr(l, 193.1, 1.0).db();
  l.stages[0].amp->gain_db += 3.0;
  CHECK(ase_snr(l, 193.1, 1.0).db() < base);
  l = two_span_link();
  l.stages[1].amp->noise_figure_db += 1.0;
  CHECK(ase_snr(l, 193.1, 1.0).db() < base);
  l = two_span_link();
  CHECK(ase_snr(l, 193.1, 4.0).db() == doctest::Approx(base + 3.0));
}

TEST_CASE("unamplified link is ASE free") {
  OpticalLink l;
  l.id = "dark";
  l.stages = {Stage{{10.0, 0.2, 0.0, 0.0}, std::nullopt}};
  CHECK(ase_snr(l, 193.1, 0.0).is_noise_free());
  CHECK(static_link_gsnr(l, 193.1, 0.0).is_noise_free());
  CHECK_CODE(calibrate_link(l, GsnrDb(20.0), 191.5, 0.0), ErrorCode::Unachievable);
}

TEST_CASE("calibration hits the target") {
  const auto l = two_span_link();
  for (double target : {20.0, 23.3, 27.2, 30.0}) {
    const auto c = calibrate_link(l, GsnrDb(target), 191.5, 1.0);
    CHECK(static_link_gsnr(c, 191.5, 1.0).db() == doctest::Approx(target).epsilon(1e-10));
    const double shift = c.stages[0].amp->noise_figure_db - l.stages[0].amp->noise_figure_db;
    CHECK(c.stages[1].amp->noise_figure_db - l.stages[1].amp->noise_figure_db == doctest::Approx(shift));
  }
}

TEST_CASE("calibration refusals") {
  const auto l = two_span_link();
  CHECK_CODE(calibrate_link(l, GsnrDb::noise_free(), 191.5, 1.0), ErrorCode::Unachievable);
  CHECK_CODE(calibrate_link(l, GsnrDb::zero_snr(), 191.5, 1.0), ErrorCode::Unachievable);
  CHECK_CODE(calibrate_link(l, GsnrDb(41.5), 191.5, 1.0), ErrorCode::Unachievable);
  CHECK_CODE(calibrate_link(l, GsnrDb(38.0), 191.5, 1.0), ErrorCode::Unachievable);
}

TEST_CASE("amplifier tilt moves the noise figure around the pivot") {
  Amplifier a{20.0, 5.0, 0.1, 191.5};
  CHECK(a.effective_nf_db(191.5) == 5.0);
  CHECK(a.effective_nf_db(193.5) == doctest::Approx(4.8));
  CHECK(a.effective_nf_db(190.5) == doctest::Approx(5.1));
}

TEST_CASE("seed mixing is stable") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(hash_name("AAL1") == hash_name("AAL1"));
  CHECK(hash_name("AAL1") != hash_name("AAL2"));
  CHECK(hash_name("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("OU path is lazy, cached and order independent") {
  OuPath a({0.05, 600.0, 42});
  OuPath b({0.05, 600.0, 42});
  const double late = a.at(10000.0);
  const double early = a.at(100.0);
  CHECK(b.at(100.0) == early);
  CHECK(b.at(10000.0) == late);
  CHECK(a.at(102.0) == a.at(100.0));
  CHECK(a.samples().size() == 2001);
}

TEST_CASE("OU path has the configured stationary spread and correlation") {
  OuPath p({0.05, 600.0, 9});
  p.extend_to(5.0 * 400000);
  const auto& v = p.samples();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    var += (v[i] - mean) * (v[i] - mean);
    if (i + 120 < v.size()) cov += (v[i] - mean) * (v[i + 120] - mean);
  }
  var /= v.size();
  cov /= v.size() - 120;
  CHECK(std::sqrt(var) == doctest::Approx(0.05).epsilon(0.05));
  CHECK(mean == doctest::Approx(0.0).epsilon(0.01));
  CHECK(cov / var == doctest::Approx(std::exp(-1.0)).epsilon(0.1));
}

TEST_CASE("zero sigma path is flat") {
  OuPath p({0.0, 600.0, 1});
  CHECK(p.at(0.0) == 0.0);
  CHECK(p.at(1e5) == 0.0);
}

TEST_CASE("line system: truth, band limits and paths") {
  ChannelPlan plan = ChannelPlan::reference();
  std::vector<Node> nodes = {{"S1", false, GsnrDb::noise_free()},
                             {"P1", true, GsnrDb(30.0)},
                             {"P2", true, GsnrDb(30.0)},
                             {"S2", false, GsnrDb::noise_free()}};
  std::vector<OpticalLink> links = {simple("A1", "S1", "P1", 23.0), simple("C", "P1", "P2", 24.0, 0.05),
                                    simple("A2", "P2", "S2", 27.0)};
  LineSystem line(plan, nodes, links, 5);

  CHECK(line.static_gsnr("A1", 191.5).db() == doctest::Approx(23.0).epsilon(1e-10));
  CHECK(line.link_gsnr("A1", 191.5, 1234.0).db() == doctest::Approx(23.0).epsilon(1e-10));
  CHECK(line.link_gsnr("C", 191.5, 1234.0).db() != doctest::Approx(24.0).epsilon(1e-10));
  CHECK_CODE(line.link_gsnr("A1", 190.0, 0.0), ErrorCode::FrequencyOutOfRange);
  CHECK_CODE(line.link("nope"), ErrorCode::UnknownLink);
  CHECK_CODE(line.node("nope"), ErrorCode::UnknownNode);

  const auto ete = line.make_path({"A1", "C", "A2"}, "S1");
  CHECK(ete.a_termination.is_noise_free());
  CHECK(ete.z_termination.is_noise_free());
  const auto rev = line.make_path({"A2", "C", "A1"}, "S2");
  CHECK(rev.links == std::vector<std::string>{"A2", "C", "A1"});
  CHECK(ete.reversed().links == rev.links);

  const auto probe = line.make_path({"A1"}, "S1");
  CHECK(probe.z_termination.db() == 30.0);
  const auto cl = line.make_path({"C"}, "P2");
  CHECK(cl.a_termination.db() == 30.0);
  CHECK(cl.z_termination.db() == 30.0);
  const double with_pops = line.path_line_gsnr(probe, 191.5, 0.0).db();
  CHECK(with_pops == doctest::Approx(combine_inverse({GsnrDb(23.0), GsnrDb(30.0)}).db()).epsilon(1e-10));

  CHECK_CODE(line.make_path({"A1", "A2"}, "S1"), ErrorCode::MissingLink);
  CHECK_CODE(line.make_path({"A1"}, "P2"), ErrorCode::MissingLink);
}

TEST_CASE("window sampling") {
  CHECK(window_samples(0.0, 30.0, 5.0).size() == 6);
  CHECK(window_samples(10.0, 20.0, 5.0).front() == 10.0);
  CHECK(window_samples(0.0, 2.0, 5.0).size() == 1);
}

TEST_CASE("measure_ber matches the composed GSNR and advances the clock") {
  ChannelPlan plan = ChannelPlan::reference();
  std::vector<Node> nodes = {{"S1", false, GsnrDb::noise_free()}, {"P1", true, GsnrDb(30.0)}};
  LineSystem line(plan, nodes, {simple("A1", "S1", "P1", 23.0)}, 1);
  const auto trx = reference_catalog("A", 191.3, 196.1, 100);
  const auto path = line.make_path({"A1"}, "S1");
  VirtualClock clock;
  const auto b = measure_ber(line, path, trx, trx, "400G-DP16QAM-64GBd", 191.5, 30.0, clock);
  const auto expected = combine_inverse({GsnrDb(17.51), GsnrDb(23.0), GsnrDb(30.0)});
  CHECK(gsnr_from_ber(b, Modulation::QAM16).db() == doctest::Approx(expected.db()).epsilon(1e-9));
  CHECK(clock.now() == 30.0);
  CHECK_CODE(measure_ber(line, path, trx, trx, "nope", 191.5, 30.0, clock), ErrorCode::ModeUnsupported);
  CHECK_CODE(measure_ber(line, path, trx, trx, "400G-DP16QAM-64GBd", 197.0, 30.0, clock),
             ErrorCode::FrequencyOutOfRange);
}

TEST_CASE("empty path gives back-to-back BER") {
  LineSystem line(ChannelPlan::reference(), {}, {}, 1);
  const TrxSnrFn b2b = [](double) { return GsnrDb(17.1); };
  const double ber = mean_ber(line, LinePath{}, b2b, Modulation::QPSK, 191.5, 0.0, 30.0);
  CHECK(ber == doctest::Approx(ber_from_gsnr(GsnrDb(17.1), Modulation::QPSK).value()));
}

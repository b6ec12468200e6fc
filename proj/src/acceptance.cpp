#include "fastwdm/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fastwdm/agent.hpp"
#include "fastwdm/error.hpp"
#include "fastwdm/kernels.hpp"
#include "fastwdm/netgraph.hpp"
#include "fastwdm/protocol.hpp"
#include "fastwdm/qot.hpp"
#include "fastwdm/scenario.hpp"
#include "fastwdm/telemetry.hpp"

namespace fastwdm {

namespace {

std::string f2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string f3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

CriterionResult concatenation() {
  CriterionResult r{1, "GSNR concatenation", false, "", "19.7 / 11.7 dB +/- 0.05"};
  const double a = combine_inverse({GsnrDb(23.3), GsnrDb(23.9), GsnrDb(27.2)}).db();
  const double b = combine_inverse({GsnrDb(23.6), GsnrDb(12.4), GsnrDb(23.0)}).db();
  r.measured = f3(a) + " / " + f3(b) + " dB";
  r.pass = near(a, 19.7, 0.05) && near(b, 11.7, 0.05);
  return r;
}

CriterionResult q_chain() {
  CriterionResult r{2, "Q-factor conversion", false, "", "Q2 8.79 / 9.40 dB, QPSK 10.63 dB +/- 0.05"};
  const double q1 = q_squared_from_ber(ber_from_gsnr(GsnrDb(15.47), Modulation::QAM16)).db;
  const double q2 = q_squared_from_ber(ber_from_gsnr(GsnrDb(16.12), Modulation::QAM16)).db;
  const double q3 = q_squared_from_ber(ber_from_gsnr(GsnrDb(10.63), Modulation::QPSK)).db;
  r.measured = f3(q1) + " / " + f3(q2) + " / " + f3(q3) + " dB";
  r.pass = near(q1, 8.79, 0.05) && near(q2, 9.40, 0.05) && near(q3, 10.63, 0.05);
  return r;
}

ProvisioningReport run_bundled(const Scenario& sc) {
  Testbed tb(sc);
  return tb.provisioner().provision(*sc.request);
}

CriterionResult short_route(const Scenario& sc) {
  CriterionResult r{3, "Short-route provisioning", false, "",
                    "1 x 400G 16QAM, est 15.47 +/- 0.1, margin 5.2 +/- 0.15, |error| <= 0.7"};
  const auto rep = run_bundled(sc);
  if (!rep.ok()) {
    r.measured = rep.status + ": " + rep.message;
    return r;
  }
  std::ostringstream m;
  m << rep.channels.size() << " ch";
  bool ok = rep.channels.size() == 1;
  for (const auto& c : rep.channels) {
    m << ", " << c.mode_id << " est " << f2(c.est_gsnr_db) << " margin " << f2(c.secured_margin_db) << " error "
      << f2(c.error_db);
    ok = ok && c.modulation == Modulation::QAM16 && c.line_rate_gbps == 400.0 && near(c.est_gsnr_db, 15.47, 0.1) &&
         near(c.secured_margin_db, 5.2, 0.15) && std::abs(c.error_db) <= 0.7;
  }
  r.measured = m.str();
  r.pass = ok;
  return r;
}

CriterionResult long_route(const Scenario& sc) {
  CriterionResult r{4, "Long-route provisioning", false, "",
                    "2 x 200G QPSK at 191.5/194.6 THz, margins 5.1/4.9 +/- 0.2, 400G infeasible"};
  const auto rep = run_bundled(sc);
  if (!rep.ok() || !rep.route) {
    r.measured = rep.status + ": " + rep.message;
    return r;
  }
  std::ostringstream m;
  m << rep.channels.size() << " ch";
  bool ok = rep.channels.size() == 2;
  const double want_f[] = {191.5, 194.6};
  const double want_m[] = {5.1, 4.9};
  for (std::size_t i = 0; i < rep.channels.size(); ++i) {
    const auto& c = rep.channels[i];
    m << ", " << f2(c.freq_thz) << " THz " << to_string(c.modulation) << " margin " << f2(c.secured_margin_db);
    if (i < 2)
      ok = ok && c.modulation == Modulation::QPSK && c.line_rate_gbps == 200.0 && near(c.freq_thz, want_f[i], 1e-9) &&
           near(c.secured_margin_db, want_m[i], 0.2);
  }

  std::vector<LinkGsnrRecord> records;
  for (const auto& u : rep.links) records.push_back(u.record);
  std::map<std::string, double> tilts;
  for (const auto& l : sc.links) tilts[l.id] = l.inventory_tilt_db_per_thz;
  const auto& src = sc.muxes.front();
  const auto& dst = sc.muxes.back();
  bool judged_infeasible = false;
  for (const auto& mode : common_modes(src.characteristics, dst.characteristics)) {
    if (mode.line_rate_gbps < sc.request->demand_gbps) continue;
    const double est = estimate_ete(records, rep.route->links, mode.snr_trx, 191.5, tilts).db();
    const double need = mode.required_gsnr.db() + rep.required_margin_db;
    m << "; " << mode.id << " est " << f2(est) << " < " << f2(need);
    judged_infeasible = est < need;
  }
  r.measured = m.str();
  r.pass = ok && judged_infeasible;
  return r;
}

CriterionResult timing(const Scenario& sc) {
  CriterionResult r{5, "Timing budget", false, "", "probe 270 s, design < 1 s, configure/verify 80 s, total 351 s"};
  const auto rep = run_bundled(sc);
  const auto& t = rep.timing;
  r.measured = "gather " + f2(t.gather_s) + " s, probe " + f2(t.probe_s) + " s, design " + f2(t.design_s) +
               " s, configure/verify " +
               f2(t.config_s) + " s, total " + f2(t.total_s) + " s";
  r.pass = rep.ok() && near(t.probe_s, 270.0, 1e-6) && t.design_s < 1.0 &&
           near(t.config_s, 80.0, 1e-6) && near(t.total_s, 351.0, 1e-6) && t.total_s < 360.0;
  return r;
}

CriterionResult margins(const Scenario& sc) {
  CriterionResult r{6, "Margin table lookup", false, "", "0.65 / 0.43 / 0.69 dB"};
  const auto& table = sc.provisioner.margins;
  const std::pair<double, double> cases[] = {{50, 0.65}, {100, 0.65}, {120, 0.43}, {150, 0.43}, {162, 0.69}, {200, 0.69}};
  bool ok = true;
  std::ostringstream m;
  for (const auto& [km, want] : cases) {
    const double got = table.required_margin(km);
    m << (m.tellp() ? " " : "") << f2(km) << "km:" << f2(got);
    ok = ok && got == want;
  }
  r.measured = m.str();
  r.pass = ok;
  return r;
}

CriterionResult estimation_error(const Scenario& shrt, const Scenario& lng, const AcceptanceOptions& o) {
  CriterionResult r{7, "Estimation error", false, "", ">= 99% of runs within 0.7 dB, 0 violations"};
  struct Run {
    bool ok = false;
    double worst = 0.0;
    int violations = 0;
  };
  const auto n = static_cast<std::size_t>(o.sweep_runs);
  auto runs = kernels::sweep_parallel<Run>(2 * n, [&](std::size_t i) {
    Scenario sc = i < n ? shrt : lng;
    sc.seed = o.seed + i % n;
    const auto rep = run_bundled(sc);
    Run out;
    out.ok = rep.ok();
    for (const auto& c : rep.channels) {
      out.worst = std::max(out.worst, std::abs(c.error_db));
      if (c.measured_gsnr_db < c.required_gsnr_db) ++out.violations;
    }
    return out;
  });
  int within = 0, failed = 0, violations = 0;
  double worst = 0.0;
  for (const auto& run : runs) {
    if (!run.ok) {
      ++failed;
      continue;
    }
    if (run.worst <= 0.7) ++within;
    worst = std::max(worst, run.worst);
    violations += run.violations;
  }
  const double share = runs.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(runs.size());
  r.measured = std::to_string(within) + "/" + std::to_string(runs.size()) + " within, worst " + f3(worst) +
               " dB, " + std::to_string(violations) + " violations, " + std::to_string(failed) + " failed";
  r.pass = !runs.empty() && share >= 0.99 && violations == 0;
  return r;
}

std::vector<double> brute_moving_average(const Series& s, double w) {
  std::vector<double> out;
  const double t0 = s.samples.front().t;
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    const double t = s.samples[i].t;
    if (t - t0 < w) continue;
    long double sum = 0;
    std::size_t k = 0;
    for (std::size_t j = i + 1; j-- > 0;) {
      if (!(s.samples[j].t > t - w)) break;
      sum += s.samples[j].gsnr_db;
      ++k;
    }
    out.push_back(static_cast<double>(sum / k));
  }
  return out;
}

double sorted_percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

CriterionResult fluctuation_stat(const Scenario& shrt, const Scenario& lng, const AcceptanceOptions& o) {
  CriterionResult r{8, "Fluctuation statistic", false, "", "p95-p5 in [0.05, 0.25] dB per link, oracle match 1e-12"};
  const double duration = o.telemetry_days * 86400.0;
  const double window = 300.0;
  bool ok = true;
  double max_dev = 0.0;
  std::ostringstream m;
  for (const Scenario* sc : {&shrt, &lng}) {
    Testbed tb(*sc);
    for (const auto& link : sc->links) {
      const auto series = sample_link(tb.world().line(), link.id, sc->provisioner.probe.freq_thz, 0.0, duration,
                                      sc->cadence_s);
      const auto stats = fluctuation(series, window);
      const auto ma = moving_average(series, window).values();
      const auto oracle = brute_moving_average(series, window);
      if (ma.size() != oracle.size()) {
        ok = false;
        continue;
      }
      for (std::size_t i = 0; i < ma.size(); ++i) max_dev = std::max(max_dev, std::abs(ma[i] - oracle[i]));
      max_dev = std::max(max_dev, std::abs(stats.p5 - sorted_percentile(oracle, 5)));
      max_dev = std::max(max_dev, std::abs(stats.p95 - sorted_percentile(oracle, 95)));
      m << sc->name << "/" << link.id << " " << f3(stats.fluctuation) << " ";
      ok = ok && stats.fluctuation >= 0.05 && stats.fluctuation <= 0.25;
    }
  }
  char dev[32];
  std::snprintf(dev, sizeof dev, "%.1e", max_dev);
  r.measured = m.str() + "dB, oracle dev " + dev;
  r.pass = ok && max_dev <= 1e-12;
  return r;
}

struct RandomGraph {
  DcxGraph graph;
  std::vector<GraphEdge> edges;
  std::vector<std::string> sites;
};

RandomGraph random_graph(std::mt19937_64& rng) {
  RandomGraph g;
  std::uniform_int_distribution<int> nn(2, 8);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> km(1.0, 150.0);
  const int n = nn(rng);
  std::vector<std::pair<std::string, NodeRole>> nodes;
  for (int i = 0; i < n; ++i) {
    const bool site = i < 2 || (coin(rng) && coin(rng));
    const std::string id = (site ? "S" : "P") + std::to_string(i);
    nodes.emplace_back(id, site ? NodeRole::Site : NodeRole::Pop);
    g.graph.add_node(id, nodes.back().second);
    if (site) g.sites.push_back(id);
  }
  std::bernoulli_distribution dense(0.55);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (nodes[i].second == NodeRole::Site && nodes[j].second == NodeRole::Site) continue;
      if (!dense(rng)) continue;
      GraphEdge e{"L" + std::to_string(k++), nodes[i].first, nodes[j].first, std::round(km(rng))};
      g.graph.add_edge(e);
      g.edges.push_back(e);
    }
  return g;
}

std::vector<RouteCandidate> oracle_routes(const RandomGraph& g, const std::string& src, const std::string& dst,
                                          const RoutingPolicy& policy) {
  std::vector<std::string> others;
  for (const auto& id : g.graph.nodes())
    if (id != src && id != dst) others.push_back(id);
  auto edge_between = [&](const std::string& a, const std::string& b) -> const GraphEdge* {
    for (const auto& e : g.edges)
      if ((e.a == a && e.z == b) || (e.a == b && e.z == a)) return &e;
    return nullptr;
  };
  std::vector<RouteCandidate> out;
  if (src == dst) return out;
  const std::size_t m = others.size();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::string> mid;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) mid.push_back(others[i]);
    std::sort(mid.begin(), mid.end());
    do {
      std::vector<std::string> path{src};
      path.insert(path.end(), mid.begin(), mid.end());
      path.push_back(dst);
      RouteCandidate c;
      c.nodes = path;
      bool valid = true;
      for (std::size_t i = 0; i + 1 < path.size() && valid; ++i) {
        const auto* e = edge_between(path[i], path[i + 1]);
        if (!e) {
          valid = false;
          break;
        }
        c.links.push_back(e->link_id);
        c.length_km += e->length_km;
      }
      if (!valid) continue;
      if (std::any_of(mid.begin(), mid.end(), [&](const auto& id) { return g.graph.role(id) != NodeRole::Pop; }))
        continue;
      if (static_cast<int>(mid.size()) > policy.max_pops) continue;
      c.latency_ms = latency_of(c.length_km, policy);
      if (!(c.latency_ms < policy.max_latency_ms)) continue;
      out.push_back(std::move(c));
    } while (std::next_permutation(mid.begin(), mid.end()));
  }
  std::sort(out.begin(), out.end(), [](const RouteCandidate& a, const RouteCandidate& b) {
    if (a.pop_count() != b.pop_count()) return a.pop_count() < b.pop_count();
    if (a.length_km != b.length_km) return a.length_km < b.length_km;
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.links < b.links;
  });
  return out;
}

DcxGraph four_pattern_fixture() {
  DcxGraph g;
  g.add_node("A", NodeRole::Site);
  g.add_node("B", NodeRole::Site);
  for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) g.add_node(p, NodeRole::Pop);
  const std::tuple<const char*, const char*, const char*, double> edges[] = {
      {"a1", "A", "P1", 10}, {"b2", "B", "P2", 10}, {"c12", "P1", "P2", 30}, {"c13", "P1", "P3", 20},
      {"c32", "P3", "P2", 20}, {"c14", "P1", "P4", 25}, {"c42", "P4", "P2", 25}, {"c15", "P1", "P5", 30},
      {"c52", "P5", "P2", 30}, {"c34", "P3", "P4", 5}};
  for (const auto& [id, a, z, km] : edges) g.add_edge({id, a, z, km});
  return g;
}

CriterionResult enumeration(const AcceptanceOptions& o) {
  CriterionResult r{9, "Route enumeration", false, "", "oracle match on all random graphs, 4 fixture routes"};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pops(1, 4);
  std::uniform_real_distribution<double> lat(0.3, 3.0);
  int graphs = 0, mismatches = 0;
  std::size_t compared = 0;
  for (int i = 0; i < o.random_graphs; ++i) {
    const auto g = random_graph(rng);
    RoutingPolicy policy;
    policy.max_pops = pops(rng);
    policy.max_latency_ms = lat(rng);
    ++graphs;
    for (const auto& s : g.sites)
      for (const auto& d : g.sites) {
        const auto got = enumerate_routes(g.graph, s, d, policy);
        const auto want = oracle_routes(g, s, d, policy);
        compared += want.size();
        bool same = got.size() == want.size();
        for (std::size_t k = 0; same && k < got.size(); ++k)
          same = got[k].nodes == want[k].nodes && got[k].links == want[k].links &&
                 near(got[k].length_km, want[k].length_km, 1e-9) && near(got[k].latency_ms, want[k].latency_ms, 1e-12);
        if (!same) ++mismatches;
      }
  }
  const auto fixture = enumerate_routes(four_pattern_fixture(), "A", "B");
  r.measured = std::to_string(graphs) + " graphs, " + std::to_string(compared) + " routes, " +
               std::to_string(mismatches) + " mismatches, fixture " + std::to_string(fixture.size()) + " routes";
  r.pass = mismatches == 0 && fixture.size() == 4;
  return r;
}

nlohmann::json random_value(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 2 ? 4 : 6);
  switch (pick(rng)) {
    case 0:
      return nullptr;
    case 1:
      return std::bernoulli_distribution(0.5)(rng);
    case 2:
      return std::uniform_int_distribution<std::int64_t>(-1'000'000'000'000, 1'000'000'000'000)(rng);
    case 3:
      return std::uniform_real_distribution<double>(-1e6, 1e6)(rng);
    case 4: {
      static const char* pieces[] = {"a", "Z", "9", " ", "\"", "\\", "\n", "\t", "\xc3\xa9", "\xe6\x97\xa5", "{", "]"};
      std::string s;
      const int len = std::uniform_int_distribution<int>(0, 12)(rng);
      for (int i = 0; i < len; ++i) s += pieces[std::uniform_int_distribution<int>(0, 11)(rng)];
      return s;
    }
    case 5: {
      auto a = nlohmann::json::array();
      const int len = std::uniform_int_distribution<int>(0, 4)(rng);
      for (int i = 0; i < len; ++i) a.push_back(random_value(rng, depth + 1));
      return a;
    }
    default: {
      auto obj = nlohmann::json::object();
      const int len = std::uniform_int_distribution<int>(0, 4)(rng);
      for (int i = 0; i < len; ++i) obj["k" + std::to_string(i)] = random_value(rng, depth + 1);
      return obj;
    }
  }
}

ProtocolMessage random_message(std::mt19937_64& rng) {
  static const char* methods[] = {"get_characteristics", "configure", "admin_set", "get_ber", "get_telemetry", "x.y"};
  const auto id = std::uniform_int_distribution<std::int64_t>(0, 1'000'000'000)(rng);
  const std::string method = methods[std::uniform_int_distribution<int>(0, 5)(rng)];
  auto body = nlohmann::json::object();
  const int len = std::uniform_int_distribution<int>(0, 5)(rng);
  for (int i = 0; i < len; ++i) body["f" + std::to_string(i)] = random_value(rng, 0);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      return ProtocolMessage::request(id, method, body);
    case 1:
      return ProtocolMessage::response(ProtocolMessage::request(id, method, {}), body);
    default: {
      const auto code = static_cast<ErrorCode>(std::uniform_int_distribution<int>(0, 10)(rng));
      return ProtocolMessage::error(id, method, code, random_value(rng, 3).dump());
    }
  }
}

nlohmann::json random_request(std::mt19937_64& rng, int trx_count) {
  static const double freqs[] = {191.5, 192.1, 193.3, 194.6, 196.0, 191.55, 190.0, 197.0};
  static const char* modes[] = {"400G-DP16QAM-64GBd", "200G-DPQPSK-64GBd", "100G-bogus"};
  std::uniform_int_distribution<int> trx(-1, trx_count);
  nlohmann::json req;
  switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
    case 0:
    case 1:
    case 2:
      req = {{"method", "configure"},
             {"params",
              {{"trx", trx(rng)},
               {"freq_thz", freqs[std::uniform_int_distribution<int>(0, 7)(rng)]},
               {"mode_id", modes[std::uniform_int_distribution<int>(0, 2)(rng)]}}}};
      break;
    case 3:
    case 4:
    case 5:
      req = {{"method", "admin_set"},
             {"params", {{"trx", trx(rng)}, {"state", std::bernoulli_distribution(0.5)(rng) ? "up" : "halted"}}}};
      break;
    case 6:
      req = {{"method", "get_ber"},
             {"params", {{"trx", trx(rng)}, {"window_s", std::uniform_int_distribution<int>(0, 30)(rng)}}}};
      break;
    case 7:
      req = {{"method", "get_telemetry"}, {"params", {{"trx", trx(rng)}}}};
      break;
    case 8:
      req = {{"method", "get_characteristics"}, {"params", nlohmann::json::object()}};
      break;
    default:
      req = {{"method", "reboot"}, {"params", nlohmann::json::object()}};
  }
  return req;
}

CriterionResult protocol_state(const Scenario& shrt, const AcceptanceOptions& o) {
  CriterionResult r{10, "Protocol and state machine", false, "", "all round trips equal, 0 configures without halt"};
  std::mt19937_64 rng(o.seed);
  int roundtrip_failures = 0;
  for (int i = 0; i < o.messages; ++i) {
    const auto msg = random_message(rng);
    try {
      if (!(decode(encode(msg)) == msg)) ++roundtrip_failures;
    } catch (const Error&) {
      ++roundtrip_failures;
    }
  }

  const std::string mux = shrt.muxes.front().id;
  const int trx_count = shrt.muxes.front().trx_count;
  int violations = 0, configured = 0, rejected = 0;
  std::uniform_int_distribution<int> length(1, o.max_sequence_length);
  for (int s = 0; s < o.sequences; ++s) {
    Scenario sc = shrt;
    sc.seed = o.seed + static_cast<std::uint64_t>(s);
    Testbed tb(sc);
    auto& world = tb.world();
    auto& agent = tb.agent(mux);
    const TrxEndpoint near_end{mux, 0}, far_end{sc.muxes.back().id, 0};
    if (sc.request) {
      const auto routes = enumerate_routes(sc.graph, sc.request->src, sc.request->dst, sc.provisioner.routing);
      if (!routes.empty())
        world.connect(near_end, far_end, world.line().make_path(routes.front().links, sc.request->src));
    }
    const int n = length(rng);
    for (int k = 0; k < n; ++k) {
      const auto req = random_request(rng, trx_count);
      const auto& params = req["params"];
      std::optional<AdminState> before;
      const bool is_configure = req["method"] == "configure";
      const int trx = params.value("trx", -1);
      if (is_configure && trx >= 0 && trx < trx_count) before = world.state({mux, trx}).admin;
      const auto reply =
          agent.handle(ProtocolMessage::request(s * 100 + k, req["method"].get<std::string>(), params));
      if (!is_configure) continue;
      if (reply.kind == MessageKind::Response) {
        ++configured;
        if (!before || *before != AdminState::Halted) ++violations;
      } else {
        ++rejected;
        if (before && *before == AdminState::Up && reply.body.value("code", "") != "NotHalted") ++violations;
      }
    }
  }
  r.measured = std::to_string(o.messages) + " messages, " + std::to_string(roundtrip_failures) +
               " round-trip failures; " + std::to_string(o.sequences) + " sequences, " + std::to_string(configured) +
               " configures accepted, " + std::to_string(rejected) + " rejected, " + std::to_string(violations) +
               " violations";
  r.pass = roundtrip_failures == 0 && violations == 0 && configured > 0;
  return r;
}

CriterionResult guarded(int id, const std::string& name, const std::function<CriterionResult()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {id, name, false, std::string("error: ") + e.what(), "no error"};
  }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(o.scenario_dir))
    throw Error(ErrorCode::ConfigError, "scenario directory not found: " + o.scenario_dir.string());
  for (const char* f : {"short.json", "long.json"})
    if (!fs::exists(o.scenario_dir / f))
      throw Error(ErrorCode::ConfigError, std::string(f) + " missing in " + o.scenario_dir.string());

  std::optional<Scenario> shrt, lng;
  std::string load_error;
  try {
    shrt = load_scenario(o.scenario_dir / "short.json");
    lng = load_scenario(o.scenario_dir / "long.json");
  } catch (const Error& e) {
    load_error = e.what();
  }
  auto needs = [&](int id, const std::string& name, const std::function<CriterionResult()>& fn) {
    if (!shrt || !lng) return CriterionResult{id, name, false, "scenario load failed: " + load_error, "valid scenarios"};
    return guarded(id, name, fn);
  };

  std::vector<CriterionResult> out;
  out.push_back(guarded(1, "GSNR concatenation", concatenation));
  out.push_back(guarded(2, "Q-factor conversion", q_chain));
  out.push_back(needs(3, "Short-route provisioning", [&] { return short_route(*shrt); }));
  out.push_back(needs(4, "Long-route provisioning", [&] { return long_route(*lng); }));
  out.push_back(needs(5, "Timing budget", [&] { return timing(*shrt); }));
  out.push_back(needs(6, "Margin table lookup", [&] { return margins(*shrt); }));
  out.push_back(needs(7, "Estimation error", [&] { return estimation_error(*shrt, *lng, o); }));
  out.push_back(needs(8, "Fluctuation statistic", [&] { return fluctuation_stat(*shrt, *lng, o); }));
  out.push_back(guarded(9, "Route enumeration", [&] { return enumeration(o); }));
  out.push_back(needs(10, "Protocol and state machine", [&] { return protocol_state(*shrt, o); }));
  return out;
}

std::string render_results(const std::vector<CriterionResult>& results) {
  std::ostringstream s;
  for (const auto& r : results) {
    s << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.name << ": "
      << r.measured << " (expected " << r.expected << ")\n";
  }
  return s.str();
}

}  // namespace fastwdm

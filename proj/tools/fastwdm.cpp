#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fastwdm/acceptance.hpp"
#include "fastwdm/error.hpp"
#include "fastwdm/report.hpp"
#include "fastwdm/scenario.hpp"
#include "fastwdm/telemetry.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace fastwdm;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kDemand = 3,
  kProbe = 4,
  kTransport = 5,
  kParse = 6,
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
      return kConfig;
    case ErrorCode::DemandUnsatisfiable:
      return kDemand;
    case ErrorCode::ProbeFailed:
      return kProbe;
    case ErrorCode::Transport:
      return kTransport;
    case ErrorCode::ParseError:
      return kParse;
    default:
      return kFailure;
  }
}

int exit_code_for(const std::string& status) {
  if (status == "ok") return kOk;
  const auto c = error_code_from_string(status);
  return c ? exit_code_for(*c) : kFailure;
}

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string timing = "virtual";
  double time_scale = 1.0;
  std::string format = "table";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--scenario", c.scenario, "Scenario JSON (default: bundled short.json)");
  app->add_option("--seed", c.seed, "Override the scenario seed");
  app->add_option("--out-dir", c.out_dir, "Write report files here");
  app->add_option("--timing", c.timing, "Clock mode")->check(CLI::IsMember({"virtual", "realtime"}));
  app->add_option("--time-scale", c.time_scale, "Wall seconds per simulated second in realtime mode")
      ->check(CLI::PositiveNumber);
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
}

Scenario load(const Common& c) {
  const fs::path path = c.scenario.empty() ? bundled_scenario_dir() / "short.json" : fs::path(c.scenario);
  auto sc = load_scenario(path);
  if (c.seed) sc.seed = *c.seed;
  return sc;
}

ClockMode clock_mode(const Common& c) { return c.timing == "realtime" ? ClockMode::Realtime : ClockMode::Virtual; }

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json meta(const Scenario& sc, const Common& c) {
  return {{"scenario", sc.name}, {"seed", sc.seed}, {"timing", c.timing}, {"wall_clock_utc", utc_now()}};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << text;
}

fs::path out_dir(const Common& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

int cmd_provision(const Common& c, std::string src, std::string dst, std::optional<double> demand,
                  std::optional<double> margin, const std::string& ledger, const std::string& transport) {
  const auto sc = load(c);
  ProvisioningRequest req = sc.request.value_or(ProvisioningRequest{});
  if (!src.empty()) req.src = src;
  if (!dst.empty()) req.dst = dst;
  if (demand) req.demand_gbps = *demand;
  if (margin) req.operational_margin_db = *margin;
  if (req.src.empty() || req.dst.empty() || req.demand_gbps <= 0.0)
    throw Error(ErrorCode::ConfigError, "no request in scenario; give --src, --dst and --demand");

  Testbed tb(sc, clock_mode(c), c.time_scale,
             ledger.empty() ? std::nullopt : std::optional<fs::path>(ledger));
  if (transport == "tcp") tb.serve_over_tcp();
  const auto report = tb.provisioner().provision(req);

  json doc = to_json(report);
  doc["meta"] = meta(sc, c);
  const std::string table = render_table(report);
  std::cout << (c.format == "json" ? doc.dump(2) + "\n" : table);
  if (!c.out_dir.empty()) {
    const auto dir = out_dir(c);
    write_file(dir / "report.json", doc.dump(2) + "\n");
    write_file(dir / "report.txt", table);
  }
  if (!report.ok()) std::cerr << "error: " << report.status << ": " << report.message << "\n";
  return exit_code_for(report.status);
}

int cmd_probe(const Common& c, const std::string& link, const std::string& ledger) {
  const auto sc = load(c);
  Testbed tb(sc, clock_mode(c), c.time_scale,
             ledger.empty() ? std::nullopt : std::optional<fs::path>(ledger));
  const auto rec = tb.provisioner().probe_link(link);
  if (c.format == "json")
    std::cout << to_json(rec).dump(2) << "\n";
  else
    std::cout << render_record(rec) << "\n";
  if (!c.out_dir.empty()) {
    json doc = to_json(rec);
    doc["meta"] = meta(sc, c);
    write_file(out_dir(c) / ("probe-" + link + ".json"), doc.dump(2) + "\n");
  }
  return kOk;
}

json stats_json(const Series& s, double window) {
  const auto st = fluctuation(s, window);
  return {{"series_id", s.id},
          {"window_s", st.window_s},
          {"p5_db", st.p5},
          {"p95_db", st.p95},
          {"fluctuation_db", st.fluctuation},
          {"duration_s", st.duration_s},
          {"points", st.points},
          {"raw_std_db", standard_deviation(s.values())}};
}

int cmd_analyze(const std::string& csv, double window, const std::string& format) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + csv);
  const auto series = read_csv(in);
  json out = json::array();
  for (const auto& s : series) out.push_back(stats_json(s, window));
  if (format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& j : out) {
      char line[160];
      std::snprintf(line, sizeof line, "%-10s p5 %.3f  p95 %.3f  fluctuation %.3f dB  (%d points)\n",
                    j["series_id"].get<std::string>().c_str(), j["p5_db"].get<double>(),
                    j["p95_db"].get<double>(), j["fluctuation_db"].get<double>(), j["points"].get<int>());
      std::cout << line;
    }
  }
  return kOk;
}

int cmd_simulate(const Common& c, double days, double freq, bool ete, const std::string& out) {
  const auto sc = load(c);
  Testbed tb(sc);
  const double duration = days * 86400.0;
  std::vector<Series> series;
  for (const auto& l : sc.links)
    series.push_back(sample_link(tb.world().line(), l.id, freq, 0.0, duration, sc.cadence_s));
  if (ete) {
    if (!sc.request) throw Error(ErrorCode::ConfigError, "--ete needs a request in the scenario");
    const auto rep = tb.provisioner().provision(*sc.request);
    if (!rep.ok()) throw Error(*error_code_from_string(rep.status), rep.message);
    const TrxEndpoint rx{tb.world().muxes_at(sc.request->dst).front(), 0};
    auto s = sample_connection(tb.world(), rx, tb.world().clock().now(), duration, sc.cadence_s);
    s.id = "EtE";
    series.push_back(std::move(s));
  }
  if (out.empty() || out == "-") {
    write_csv(std::cout, series);
  } else {
    std::ofstream f(out);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + out);
    write_csv(f, series);
  }
  return kOk;
}

int cmd_suite(const std::string& dir, const AcceptanceOptions& base, const std::string& format) {
  AcceptanceOptions o = base;
  o.scenario_dir = dir.empty() ? bundled_scenario_dir() : fs::path(dir);
  const auto results = run_acceptance(o);
  bool all = true;
  for (const auto& r : results) all = all && r.pass;
  if (format == "json") {
    json out = json::array();
    for (const auto& r : results)
      out.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"measured", r.measured},
                     {"expected", r.expected}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << render_results(results);
    std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  }
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast WDM provisioning on a simulated multi-vendor line"};
  app.require_subcommand(1);

  Common prov_c;
  std::string src, dst, prov_ledger, transport = "loopback";
  std::optional<double> demand, margin;
  auto* prov = app.add_subcommand("provision", "Probe, design and configure a connection");
  add_common(prov, prov_c);
  prov->add_option("--src", src, "Source site");
  prov->add_option("--dst", dst, "Destination site");
  prov->add_option("--demand", demand, "Demand in Gb/s");
  prov->add_option("--margin", margin, "Operational margin in dB");
  prov->add_option("--ledger", prov_ledger, "Link GSNR ledger (JSON lines)");
  prov->add_option("--transport", transport, "Controller to agent transport")
      ->check(CLI::IsMember({"loopback", "tcp"}));

  Common probe_c;
  std::string link, probe_ledger;
  auto* probe = app.add_subcommand("probe", "Probe one link and append the record");
  add_common(probe, probe_c);
  probe->add_option("--link", link, "Link id")->required();
  probe->add_option("--ledger", probe_ledger, "Link GSNR ledger (JSON lines)");

  std::string csv, analyze_format = "json";
  double window = 300.0;
  auto* analyze = app.add_subcommand("analyze", "Fluctuation statistics of a telemetry CSV");
  analyze->add_option("csv", csv, "series_id,t_seconds,gsnr_db")->required();
  analyze->add_option("--window", window, "Moving-average window in seconds")->check(CLI::PositiveNumber);
  analyze->add_option("--format", analyze_format, "Output format")->check(CLI::IsMember({"json", "table"}));

  Common sim_c;
  double days = 7.0, freq = 191.5;
  bool ete = false;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate-telemetry", "Sample link GSNR every cadence step into a CSV");
  add_common(sim, sim_c);
  sim->add_option("--days", days, "Simulated days")->check(CLI::PositiveNumber);
  sim->add_option("--freq", freq, "Channel frequency in THz");
  sim->add_flag("--ete", ete, "Also provision the request and sample the connection");
  sim->add_option("-o,--output", sim_out, "CSV path (default stdout)");

  std::string suite_dir, suite_format = "table";
  AcceptanceOptions suite_opts;
  auto* suite = app.add_subcommand("acceptance", "Run the acceptance criteria");
  suite->add_option("--scenario-dir", suite_dir, "Directory with short.json and long.json");
  suite->add_option("--seed", suite_opts.seed, "Base seed");
  suite->add_option("--runs", suite_opts.sweep_runs, "Seeded runs per scenario for the error sweep");
  suite->add_option("--format", suite_format, "Output format")->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*prov) return cmd_provision(prov_c, src, dst, demand, margin, prov_ledger, transport);
    if (*probe) return cmd_probe(probe_c, link, probe_ledger);
    if (*analyze) return cmd_analyze(csv, window, analyze_format);
    if (*sim) return cmd_simulate(sim_c, days, freq, ete, sim_out);
    if (*suite) return cmd_suite(suite_dir, suite_opts, suite_format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

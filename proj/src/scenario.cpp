#include "fastwdm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "fastwdm/error.hpp"
#include "fastwdm/json_util.hpp"

namespace fastwdm {

using nlohmann::json;
using namespace jsonutil;

namespace {

double thz_of(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::ConfigError, where + " must be a number (THz)");
  return v.get<double>();
}

ChannelPlan parse_plan(const json& j) {
  constexpr std::string_view w = "channel_plan";
  require_keys_subset(j, {"grid_ghz", "anchor_thz", "band_thz", "probe_channels", "service_channels", "background",
                          "launch_power_dbm", "reference_bandwidth_ghz", "nli_loading"},
                      w);
  ChannelPlan p = ChannelPlan::reference();
  p.grid_ghz = number_or(j, "grid_ghz", p.grid_ghz, w);
  p.grid_anchor_thz = number_or(j, "anchor_thz", p.grid_anchor_thz, w);
  if (j.contains("band_thz")) {
    const auto& b = j["band_thz"];
    if (!b.is_array() || b.size() != 2) throw Error(ErrorCode::ConfigError, "channel_plan.band_thz must be [low, high]");
    p.band_low_thz = thz_of(b[0], "channel_plan.band_thz[0]");
    p.band_high_thz = thz_of(b[1], "channel_plan.band_thz[1]");
  }
  if (j.contains("probe_channels")) {
    p.probe_channels.clear();
    for (const auto& c : j["probe_channels"]) {
      require_keys_subset(c, {"name", "thz"}, "channel_plan.probe_channels[]");
      p.probe_channels.push_back({string(c, "name", "probe channel"), number(c, "thz", "probe channel")});
    }
    p.service_channels.clear();
    for (const auto& c : p.probe_channels) p.service_channels.push_back(c.thz);
  }
  if (j.contains("service_channels")) {
    p.service_channels.clear();
    for (const auto& f : j["service_channels"]) p.service_channels.push_back(thz_of(f, "channel_plan.service_channels[]"));
  }
  if (j.contains("background")) {
    p.background.clear();
    for (const auto& b : j["background"]) {
      if (!b.is_array() || b.size() != 2)
        throw Error(ErrorCode::ConfigError, "channel_plan.background entries must be [start, end]");
      p.background.push_back({thz_of(b[0], "background start"), thz_of(b[1], "background end")});
    }
  }
  p.launch_power_dbm = number_or(j, "launch_power_dbm", p.launch_power_dbm, w);
  p.reference_bandwidth_ghz = number_or(j, "reference_bandwidth_ghz", p.reference_bandwidth_ghz, w);
  p.nli_loading = number_or(j, "nli_loading", p.nli_loading, w);
  p.validate();
  return p;
}

FluctuationParams parse_fluctuation(const json& j, const std::string& where) {
  require_keys_subset(j, {"sigma_db", "tau_s", "seed"}, where);
  FluctuationParams f;
  f.sigma_db = number_or(j, "sigma_db", 0.0, where);
  f.tau_s = number_or(j, "tau_s", 600.0, where);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::ConfigError, where + ".seed must be a non-negative integer");
    f.seed = j["seed"].get<std::uint64_t>();
  }
  if (f.sigma_db < 0.0) throw Error(ErrorCode::ConfigError, where + ".sigma_db must be >= 0");
  if (!(f.tau_s > 0.0)) throw Error(ErrorCode::ConfigError, where + ".tau_s must be > 0");
  return f;
}

Stage parse_stage(const json& j, const std::string& where, double max_residual_db) {
  require_keys_subset(j, {"length_km", "loss_db_per_km", "lumped_loss_db", "nli_eta", "amp"}, where);
  Stage s;
  s.span.length_km = number(j, "length_km", where);
  s.span.loss_db_per_km = number_or(j, "loss_db_per_km", 0.2, where);
  s.span.lumped_loss_db = number_or(j, "lumped_loss_db", 0.0, where);
  s.span.nli_eta = number_or(j, "nli_eta", 0.0, where);
  if (s.span.length_km < 0.0 || s.span.loss_db_per_km < 0.0 || s.span.lumped_loss_db < 0.0 || s.span.nli_eta < 0.0)
    throw Error(ErrorCode::ConfigError, where + ": span values must be >= 0");
  if (j.contains("amp")) {
    const auto& a = j["amp"];
    const std::string aw = where + ".amp";
    require_keys_subset(a, {"gain_db", "noise_figure_db", "tilt_db_per_thz", "pivot_thz"}, aw);
    Amplifier amp;
    amp.gain_db = number_or(a, "gain_db", s.span.loss_db(), aw);
    amp.noise_figure_db = number_or(a, "noise_figure_db", 5.0, aw);
    amp.tilt_db_per_thz = number_or(a, "tilt_db_per_thz", 0.0, aw);
    amp.pivot_thz = number_or(a, "pivot_thz", kDefaultPivotThz, aw);
    if (amp.gain_db < 0.0) throw Error(ErrorCode::ConfigError, aw + ".gain_db must be >= 0");
    if (amp.noise_figure_db < 0.0) throw Error(ErrorCode::ConfigError, aw + ".noise_figure_db must be >= 0");
    if (std::abs(amp.gain_db - s.span.loss_db()) > max_residual_db + 1e-9)
      throw Error(ErrorCode::ConfigError, aw + ": gain " + std::to_string(amp.gain_db) +
                                              " dB does not compensate span loss " + std::to_string(s.span.loss_db()) +
                                              " dB");
    s.amp = amp;
  }
  return s;
}

TrxCharacteristics parse_vendor(const json& j) {
  try {
    return characteristics_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, "vendors[]: " + e.detail());
  }
}

}  // namespace

Scenario parse_scenario(const json& j) {
  constexpr std::string_view w = "scenario";
  require_keys_subset(j, {"schema", "name", "seed", "channel_plan", "nodes", "links", "vendors", "muxponders",
                          "margin_table", "timing", "probe", "routing", "squelch_gsnr_db", "request", "description"},
                      w);
  if (j.contains("schema") && j["schema"] != 1)
    throw Error(ErrorCode::ConfigError, "unsupported scenario schema " + j["schema"].dump());

  Scenario sc;
  sc.name = j.contains("name") ? string(j, "name", w) : std::string("unnamed");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorCode::ConfigError, "scenario.seed must be a non-negative integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  sc.plan = parse_plan(j.contains("channel_plan") ? j["channel_plan"] : json::object());

  // Timing first; cadence is needed for the line system.
  ProvisionerConfig& pc = sc.provisioner;
  if (j.contains("timing")) {
    const auto& t = j["timing"];
    constexpr std::string_view tw = "timing";
    require_keys_subset(t, {"transition_s", "probe_window_s", "verify_window_s", "gather_s", "design_s",
                            "sample_cadence_s", "ledger_freshness_s"},
                        tw);
    sc.world_timing.transition_s = number_or(t, "transition_s", sc.world_timing.transition_s, tw);
    pc.probe.window_s = number_or(t, "probe_window_s", pc.probe.window_s, tw);
    pc.timing.verify_window_s = number_or(t, "verify_window_s", pc.timing.verify_window_s, tw);
    pc.timing.gather_s = number_or(t, "gather_s", pc.timing.gather_s, tw);
    pc.timing.design_s = number_or(t, "design_s", pc.timing.design_s, tw);
    sc.cadence_s = number_or(t, "sample_cadence_s", sc.cadence_s, tw);
    pc.timing.ledger_freshness_s = number_or(t, "ledger_freshness_s", pc.timing.ledger_freshness_s, tw);
    for (double v : {sc.world_timing.transition_s, pc.timing.gather_s, pc.timing.design_s})
      if (v < 0.0) throw Error(ErrorCode::ConfigError, "timing values must be >= 0");
    if (!(pc.probe.window_s > 0.0) || !(pc.timing.verify_window_s > 0.0) || !(sc.cadence_s > 0.0))
      throw Error(ErrorCode::ConfigError, "timing windows and cadence must be > 0");
  }
  if (j.contains("probe")) {
    const auto& p = j["probe"];
    constexpr std::string_view pw = "probe";
    require_keys_subset(p, {"freq_thz", "primary_mode", "fallback_mode", "ber_ceiling"}, pw);
    pc.probe.freq_thz = number_or(p, "freq_thz", pc.probe.freq_thz, pw);
    if (p.contains("primary_mode")) pc.probe.primary_mode = string(p, "primary_mode", pw);
    if (p.contains("fallback_mode")) pc.probe.fallback_mode = string(p, "fallback_mode", pw);
    pc.probe.ber_ceiling = number_or(p, "ber_ceiling", pc.probe.ber_ceiling, pw);
    if (!(pc.probe.ber_ceiling > 0.0 && pc.probe.ber_ceiling <= 0.5))
      throw Error(ErrorCode::ConfigError, "probe.ber_ceiling must be in (0, 0.5]");
  }
  if (!sc.plan.on_grid(pc.probe.freq_thz) || !sc.plan.in_band(pc.probe.freq_thz))
    throw Error(ErrorCode::ConfigError, "probe frequency is not a usable channel");
  if (j.contains("routing")) {
    const auto& r = j["routing"];
    constexpr std::string_view rw = "routing";
    require_keys_subset(r, {"max_pops", "max_latency_ms", "delay_ms_per_km"}, rw);
    pc.routing.max_pops = static_cast<int>(number_or(r, "max_pops", pc.routing.max_pops, rw));
    pc.routing.max_latency_ms = number_or(r, "max_latency_ms", pc.routing.max_latency_ms, rw);
    pc.routing.delay_ms_per_km = number_or(r, "delay_ms_per_km", pc.routing.delay_ms_per_km, rw);
    if (pc.routing.max_pops < 0 || !(pc.routing.delay_ms_per_km >= 0.0))
      throw Error(ErrorCode::ConfigError, "routing values must be >= 0");
  }
  if (j.contains("margin_table")) pc.margins = margin_table_from_json(j["margin_table"]);
  sc.world_timing.squelch_gsnr_db = number_or(j, "squelch_gsnr_db", sc.world_timing.squelch_gsnr_db, w);

  // Nodes.
  std::set<std::string> node_ids;
  for (const auto& n : required(j, "nodes", w)) {
    require_keys_subset(n, {"id", "role", "add_drop_snr_db"}, "nodes[]");
    Node node;
    node.id = string(n, "id", "nodes[]");
    const auto role = string(n, "role", "nodes[]");
    if (role != "site" && role != "pop")
      throw Error(ErrorCode::ConfigError, "node " + node.id + ": role must be 'site' or 'pop'");
    node.is_pop = role == "pop";
    if (n.contains("add_drop_snr_db")) {
      if (!node.is_pop)
        throw Error(ErrorCode::ConfigError, "node " + node.id + ": add_drop_snr_db only applies to POPs");
      node.add_drop_snr = GsnrDb(db_from_json(n["add_drop_snr_db"]));
    }
    if (!node_ids.insert(node.id).second) throw Error(ErrorCode::ConfigError, "duplicate node " + node.id);
    sc.graph.add_node(node.id, node.is_pop ? NodeRole::Pop : NodeRole::Site);
    sc.nodes.push_back(node);
  }
  auto find_node = [&](const std::string& id) -> const Node& {
    for (const auto& n : sc.nodes) {
      if (n.id == id) return n;
    }
    throw Error(ErrorCode::ConfigError, "reference to unknown node " + id);
  };

  // Links, calibrated in place.
  std::set<std::string> link_ids;
  for (const auto& l : required(j, "links", w)) {
    require_keys_subset(l, {"id", "kind", "a", "z", "stages", "fluctuation", "inventory_tilt_db_per_thz",
                            "calibrate", "max_gain_residual_db"},
                        "links[]");
    OpticalLink link;
    link.id = string(l, "id", "links[]");
    const std::string lw = "link " + link.id;
    if (!link_ids.insert(link.id).second) throw Error(ErrorCode::ConfigError, "duplicate link " + link.id);
    link.kind = link_kind_from_string(string(l, "kind", lw));
    link.a_node = string(l, "a", lw);
    link.z_node = string(l, "z", lw);
    const Node& na = find_node(link.a_node);
    const Node& nz = find_node(link.z_node);
    if (link.kind == LinkKind::AAL && na.is_pop == nz.is_pop)
      throw Error(ErrorCode::ConfigError, lw + ": an AAL joins a user site and a POP");
    if (link.kind == LinkKind::CL && !(na.is_pop && nz.is_pop))
      throw Error(ErrorCode::ConfigError, lw + ": a CL joins two POPs");
    const double residual = number_or(l, "max_gain_residual_db", 0.0, lw);
    for (const auto& s : required(l, "stages", lw)) link.stages.push_back(parse_stage(s, lw + ".stages[]", residual));
    if (l.contains("fluctuation")) link.fluctuation = parse_fluctuation(l["fluctuation"], lw + ".fluctuation");
    link.inventory_tilt_db_per_thz = number_or(l, "inventory_tilt_db_per_thz", 0.0, lw);
    if (l.contains("calibrate")) {
      const auto& c = l["calibrate"];
      const std::string cw = lw + ".calibrate";
      require_keys_subset(c, {"target_gsnr_db", "freq_thz", "reference"}, cw);
      LinkCalibration cal;
      cal.target_gsnr_db = number(c, "target_gsnr_db", cw);
      cal.freq_thz = number_or(c, "freq_thz", pc.probe.freq_thz, cw);
      const auto ref = c.contains("reference") ? string(c, "reference", cw) : std::string("line");
      if (ref == "line") {
        cal.reference = CalibrationReference::Line;
      } else if (ref == "probe") {
        cal.reference = CalibrationReference::Probe;
      } else {
        throw Error(ErrorCode::ConfigError, cw + ".reference must be 'line' or 'probe'");
      }
      GsnrDb target(cal.target_gsnr_db);
      if (cal.reference == CalibrationReference::Probe) {
        GsnrDb terms = combine_inverse({na.is_pop ? na.add_drop_snr : GsnrDb::noise_free(),
                                        nz.is_pop ? nz.add_drop_snr : GsnrDb::noise_free()});
        try {
          target = remove_contribution(target, terms);
        } catch (const Error&) {
          throw Error(ErrorCode::ConfigError, cw + ": add/drop noise alone exceeds the target");
        }
      }
      try {
        link = calibrate_link(link, target, cal.freq_thz, sc.plan.launch_power_dbm, sc.plan.reference_bandwidth_ghz,
                              sc.plan.nli_loading);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, cw + ": " + e.detail());
      }
      sc.calibrations[link.id] = cal;
    }
    sc.graph.add_edge({link.id, link.a_node, link.z_node, link.length_km()});
    sc.links.push_back(std::move(link));
  }

  // Vendors and muxponders.
  for (const auto& v : required(j, "vendors", w)) {
    auto chars = parse_vendor(v);
    const auto name = chars.vendor;
    if (!sc.vendors.emplace(name, std::move(chars)).second)
      throw Error(ErrorCode::ConfigError, "duplicate vendor " + name);
  }
  for (const auto& [name, chars] : sc.vendors) {
    for (const auto& m : {pc.probe.primary_mode, pc.probe.fallback_mode}) {
      if (!chars.find(m)) throw Error(ErrorCode::ConfigError, "vendor " + name + " lacks probe mode " + m);
    }
  }
  std::set<std::string> mux_ids;
  for (const auto& m : required(j, "muxponders", w)) {
    require_keys_subset(m, {"id", "node", "vendor", "trx_count", "b2b_offset_db", "b2b_fluctuation"}, "muxponders[]");
    MuxponderSpec spec;
    spec.id = string(m, "id", "muxponders[]");
    const std::string mw = "muxponder " + spec.id;
    if (!mux_ids.insert(spec.id).second) throw Error(ErrorCode::ConfigError, "duplicate muxponder " + spec.id);
    spec.node = string(m, "node", mw);
    find_node(spec.node);
    const auto vendor = string(m, "vendor", mw);
    auto vit = sc.vendors.find(vendor);
    if (vit == sc.vendors.end()) throw Error(ErrorCode::ConfigError, mw + ": unknown vendor " + vendor);
    spec.characteristics = vit->second;
    spec.trx_count = static_cast<int>(number_or(m, "trx_count", 2, mw));
    if (spec.trx_count < 1) throw Error(ErrorCode::ConfigError, mw + ".trx_count must be >= 1");
    if (m.contains("b2b_offset_db")) {
      const auto& off = m["b2b_offset_db"];
      if (!off.is_object()) throw Error(ErrorCode::ConfigError, mw + ".b2b_offset_db must map mode ids to dB");
      for (const auto& [mode, v] : off.items()) {
        if (!spec.characteristics.find(mode))
          throw Error(ErrorCode::ConfigError, mw + ".b2b_offset_db: unknown mode " + mode);
        if (!v.is_number()) throw Error(ErrorCode::ConfigError, mw + ".b2b_offset_db values must be numbers");
        spec.b2b_offset_db[mode] = v.get<double>();
      }
    }
    if (m.contains("b2b_fluctuation")) spec.b2b_fluctuation = parse_fluctuation(m["b2b_fluctuation"], mw + ".b2b_fluctuation");
    sc.muxes.push_back(std::move(spec));
  }

  if (j.contains("request")) {
    const auto& r = j["request"];
    require_keys_subset(r, {"src", "dst", "demand_gbps", "operational_margin_db"}, "request");
    ProvisioningRequest req;
    req.src = string(r, "src", "request");
    req.dst = string(r, "dst", "request");
    req.demand_gbps = number(r, "demand_gbps", "request");
    req.operational_margin_db = number_or(r, "operational_margin_db", 0.0, "request");
    find_node(req.src);
    find_node(req.dst);
    try {
      req.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, "request: " + e.detail());
    }
    sc.request = req;
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open scenario " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(j);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw Error(ErrorCode::ConfigError, path.string() + ": " + e.detail());
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

std::filesystem::path bundled_scenario_dir() { return FASTWDM_SCENARIO_DIR; }

Testbed::Testbed(const Scenario& scenario, ClockMode mode, double time_scale,
                 std::optional<std::filesystem::path> ledger_path)
    : scenario_(scenario) {
  LineSystem line(scenario_.plan, scenario_.nodes, scenario_.links, scenario_.seed, scenario_.cadence_s);
  world_ = std::make_unique<World>(std::move(line), scenario_.muxes, scenario_.world_timing, mode, time_scale,
                                   scenario_.seed);
  for (const auto& m : scenario_.muxes) {
    agents_[m.id] = std::make_unique<Agent>(*world_, m.id);
    clients_[m.id] = std::make_unique<AgentClient>(std::make_unique<LoopbackTransport>(*agents_[m.id]));
  }
  ledger_ = ledger_path ? std::make_unique<LinkLedger>(*ledger_path) : std::make_unique<LinkLedger>();
  wavelengths_ = std::make_unique<WavelengthLedger>(scenario_.plan);
  std::vector<std::string> all_links;
  for (const auto& l : scenario_.links) all_links.push_back(l.id);
  wavelengths_->occupy_background(all_links);
  build_provisioner();
}

void Testbed::build_provisioner() {
  std::map<std::string, AgentClient*> clients;
  for (auto& [id, c] : clients_) clients[id] = c.get();
  provisioner_ = std::make_unique<Provisioner>(*world_, scenario_.graph, std::move(clients), *wavelengths_, *ledger_,
                                               scenario_.provisioner);
}

Agent& Testbed::agent(const std::string& mux_id) {
  auto it = agents_.find(mux_id);
  if (it == agents_.end()) throw Error(ErrorCode::UnknownNode, "no agent for " + mux_id);
  return *it->second;
}

AgentClient& Testbed::client(const std::string& mux_id) {
  auto it = clients_.find(mux_id);
  if (it == clients_.end()) throw Error(ErrorCode::UnknownNode, "no client for " + mux_id);
  return *it->second;
}

void Testbed::make_unreachable(const std::string& mux_id) {
  clients_[mux_id] = std::make_unique<AgentClient>(std::make_unique<UnreachableTransport>(mux_id));
  build_provisioner();
}

std::map<std::string, std::uint16_t> Testbed::serve_over_tcp() {
  std::map<std::string, std::uint16_t> ports;
  for (auto& [id, agent] : agents_) {
    if (!servers_.count(id)) servers_[id] = std::make_unique<AgentServer>(*agent);
    ports[id] = servers_[id]->port();
    clients_[id] = std::make_unique<AgentClient>(std::make_unique<TcpTransport>("127.0.0.1", ports[id]));
  }
  build_provisioner();
  return ports;
}

}  // namespace fastwdm

#include "fastwdm/provision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fastwdm/error.hpp"

namespace fastwdm {

void ProvisioningRequest::validate() const {
  if (src.empty() || dst.empty()) throw Error(ErrorCode::InvalidArgument, "request needs src and dst");
  if (!(demand_gbps > 0.0)) throw Error(ErrorCode::InvalidArgument, "demand must be > 0 Gb/s");
  if (!(operational_margin_db >= 0.0)) throw Error(ErrorCode::InvalidArgument, "operational margin must be >= 0 dB");
}

double project_line_gsnr(const LinkGsnrRecord& r, double thz, double tilt_db_per_thz) {
  if (std::isinf(r.line_gsnr_db)) return r.line_gsnr_db;
  return r.line_gsnr_db + tilt_db_per_thz * (thz - r.probe_freq_thz);
}

GsnrDb estimate_ete(const std::vector<LinkGsnrRecord>& records, const std::vector<std::string>& links,
                    GsnrDb trx_b2b, std::optional<double> thz, const std::map<std::string, double>& tilts) {
  std::vector<GsnrDb> parts{trx_b2b};
  for (const auto& id : links) {
    auto it = std::find_if(records.rbegin(), records.rend(), [&](const LinkGsnrRecord& r) { return r.link_id == id; });
    if (it == records.rend()) throw Error(ErrorCode::MissingLink, "no probe record for link " + id);
    double line = it->line_gsnr_db;
    if (thz) {
      const auto t = tilts.find(id);
      line = project_line_gsnr(*it, *thz, t == tilts.end() ? 0.0 : t->second);
    }
    parts.push_back(std::isinf(line) && line > 0 ? GsnrDb::noise_free() : GsnrDb(line));
  }
  return combine_inverse(parts);
}

namespace {

struct Option {
  TransmissionMode mode;
  int count = 0;
  std::vector<PlannedChannel> channels;
  double worst_margin = 0.0;
  double shortfall_db = 0.0;
  bool feasible = false;
  std::string why;
};

std::string describe(const Option& o) {
  std::ostringstream s;
  s << o.count << " x " << o.mode.id;
  return s.str();
}

}  // namespace

std::vector<PlannedChannel> select_plan(const PlanInputs& in,
                                        const std::function<std::vector<double>(int)>& channels_for) {
  if (!(in.demand_gbps > 0.0)) throw Error(ErrorCode::InvalidArgument, "demand must be > 0 Gb/s");
  if (in.modes.empty()) throw Error(ErrorCode::DemandUnsatisfiable, "the user transceivers share no mode");

  std::vector<Option> options;
  for (const auto& mode : in.modes) {
    Option o;
    o.mode = mode;
    o.count = static_cast<int>(std::ceil(in.demand_gbps / mode.line_rate_gbps - 1e-9));
    std::vector<double> freqs;
    try {
      freqs = channels_for(o.count);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoWavelengthAvailable) throw;
      o.shortfall_db = std::numeric_limits<double>::infinity();
      o.why = e.detail();
      options.push_back(std::move(o));
      continue;
    }
    const double need = mode.required_gsnr.db() + in.required_margin_db + in.operational_margin_db;
    o.worst_margin = std::numeric_limits<double>::infinity();
    o.shortfall_db = -std::numeric_limits<double>::infinity();
    for (double f : freqs) {
      const double est = estimate_ete(in.records, in.links, mode.snr_trx, f, in.tilts).db();
      PlannedChannel ch{f, mode, est, est - mode.required_gsnr.db()};
      o.worst_margin = std::min(o.worst_margin, ch.secured_margin_db);
      o.shortfall_db = std::max(o.shortfall_db, need - est);
      o.channels.push_back(std::move(ch));
    }
    o.feasible = o.shortfall_db <= 0.0;
    options.push_back(std::move(o));
  }

  std::vector<const Option*> feasible;
  for (const auto& o : options) {
    if (o.feasible) feasible.push_back(&o);
  }
  if (feasible.empty()) {
    const auto best = std::min_element(options.begin(), options.end(), [](const Option& a, const Option& b) {
      return a.shortfall_db < b.shortfall_db;
    });
    std::ostringstream msg;
    msg << "no mode meets " << in.demand_gbps << " Gb/s; best option " << describe(*best);
    if (std::isinf(best->shortfall_db)) {
      msg << " (" << best->why << ")";
    } else {
      msg << " is short by " << best->shortfall_db << " dB";
    }
    throw Error(ErrorCode::DemandUnsatisfiable, msg.str());
  }
  std::sort(feasible.begin(), feasible.end(), [](const Option* a, const Option* b) {
    if (a->count != b->count) return a->count < b->count;
    if (a->worst_margin != b->worst_margin) return a->worst_margin > b->worst_margin;
    std::vector<double> fa, fb;
    for (const auto& c : a->channels) fa.push_back(c.freq_thz);
    for (const auto& c : b->channels) fb.push_back(c.freq_thz);
    if (fa != fb) return fa < fb;
    return a->mode.id < b->mode.id;
  });
  return feasible.front()->channels;
}

Provisioner::Provisioner(World& world, DcxGraph graph, std::map<std::string, AgentClient*> clients,
                         WavelengthLedger& wavelengths, LinkLedger& ledger, ProvisionerConfig config)
    : world_(world),
      graph_(std::move(graph)),
      clients_(std::move(clients)),
      wavelengths_(wavelengths),
      ledger_(ledger),
      config_(std::move(config)) {}

AgentClient& Provisioner::client(const std::string& mux_id) {
  auto it = clients_.find(mux_id);
  if (it == clients_.end() || !it->second)
    throw Error(ErrorCode::Transport, "no connection to agent " + mux_id);
  return *it->second;
}

std::string Provisioner::mux_at(const std::string& node) const {
  const auto ids = world_.muxes_at(node);
  if (ids.empty()) throw Error(ErrorCode::ConfigError, "no muxponder at node " + node);
  return ids.front();
}

TrxEndpoint Provisioner::probe_endpoint(const std::string& node) {
  const auto id = mux_at(node);
  return {id, world_.mux(id).trx_count - 1};
}

std::optional<BerReading> Provisioner::try_probe(const TrxEndpoint& a, const TrxEndpoint& z,
                                                 const std::string& mode_id) {
  auto& ca = client(a.mux);
  auto& cz = client(z.mux);
  ca.admin_set(a.trx, AdminState::Halted);
  cz.admin_set(z.trx, AdminState::Halted);
  try {
    ParallelRegion region(world_.clock());
    ca.configure(a.trx, config_.probe.freq_thz, mode_id);
    cz.configure(z.trx, config_.probe.freq_thz, mode_id);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownMode || e.code() == ErrorCode::FrequencyOutOfRange) return std::nullopt;
    throw;
  }
  ca.admin_set(a.trx, AdminState::Up);
  cz.admin_set(z.trx, AdminState::Up);
  BerReading r;
  try {
    r = cz.get_ber(z.trx, config_.probe.window_s);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LossOfSignal) return std::nullopt;
    throw;
  }
  if (!(r.ber <= config_.probe.ber_ceiling)) return std::nullopt;
  return r;
}

LinkGsnrRecord Provisioner::probe_link(const std::string& link_id) {
  const OpticalLink& link = world_.line().link(link_id);
  const TrxEndpoint a = probe_endpoint(link.a_node);
  const TrxEndpoint z = probe_endpoint(link.z_node);
  const auto chars_a = client(a.mux).characteristics();
  const auto chars_z = client(z.mux).characteristics();

  world_.disconnect(a);
  world_.disconnect(z);
  world_.connect(a, z, world_.line().make_path({link_id}, link.a_node));
  struct Unpatch {
    World& w;
    TrxEndpoint a, z;
    ~Unpatch() {
      w.disconnect(a);
      w.disconnect(z);
    }
  } unpatch{world_, a, z};

  bool fallback = false;
  auto reading = try_probe(a, z, config_.probe.primary_mode);
  if (!reading) {
    fallback = true;
    reading = try_probe(a, z, config_.probe.fallback_mode);
  }
  client(a.mux).admin_set(a.trx, AdminState::Halted);
  client(z.mux).admin_set(z.trx, AdminState::Halted);
  if (!reading)
    throw Error(ErrorCode::ProbeFailed, "link " + link_id + ": no usable BER with " + config_.probe.primary_mode +
                                            " or " + config_.probe.fallback_mode);

  const auto& ma = chars_a.mode(reading->mode_id);
  const auto& mz = chars_z.mode(reading->mode_id);
  const GsnrDb b2b = pair_back_to_back(ma.snr_trx, mz.snr_trx);
  const GsnrDb raw = gsnr_from_ber(Ber(reading->ber), ma.modulation);
  // A line that adds no measurable noise leaves raw at (or within solver
  // tolerance of) the back-to-back value.
  const GsnrDb line = raw.db() >= b2b.db() - 1e-6 ? GsnrDb::noise_free() : remove_contribution(raw, b2b);

  LinkGsnrRecord rec;
  rec.link_id = link_id;
  rec.probe_mode_id = reading->mode_id;
  rec.probe_modulation = ma.modulation;
  rec.ber = reading->ber;
  rec.raw_gsnr_db = raw.db();
  rec.probe_snr_trx_db = b2b.db();
  rec.line_gsnr_db = line.db();
  rec.timestamp = reading->timestamp;
  rec.probe_freq_thz = reading->freq_thz;
  rec.fallback = fallback;
  ledger_.append(rec);
  return rec;
}

ProvisioningReport Provisioner::provision(const ProvisioningRequest& request) {
  ProvisioningReport report;
  report.request = request;
  VirtualClock& clock = world_.clock();
  const double t_start = clock.now();
  auto finish = [&](ErrorCode code, const std::string& message) {
    report.status = std::string(to_string(code));
    report.message = message;
    report.timing.total_s = clock.now() - t_start;
    return report;
  };

  try {
    request.validate();
  } catch (const Error& e) {
    return finish(e.code(), e.detail());
  }

  TrxCharacteristics chars_src, chars_dst;
  std::string mux_src, mux_dst;
  try {
    mux_src = mux_at(request.src);
    mux_dst = mux_at(request.dst);
    chars_src = client(mux_src).characteristics();
    chars_dst = client(mux_dst).characteristics();
  } catch (const Error& e) {
    return finish(e.code(), e.detail());
  }
  clock.advance(config_.timing.gather_s);
  report.timing.gather_s = clock.now() - t_start;

  const auto modes = common_modes(chars_src, chars_dst);
  std::vector<RouteCandidate> routes;
  try {
    routes = enumerate_routes(graph_, request.src, request.dst, config_.routing);
  } catch (const Error& e) {
    return finish(e.code(), e.detail());
  }
  if (routes.empty()) return finish(ErrorCode::DemandUnsatisfiable, "no route satisfies the POP and latency limits");

  std::string last_failure = "no candidate route could carry the demand";
  for (const auto& route : routes) {
    const std::string route_name = [&] {
      std::string s;
      for (const auto& n : route.nodes) s += (s.empty() ? "" : "-") + n;
      return s;
    }();
    double required_margin = 0.0;
    try {
      required_margin = config_.margins.required_margin(route.length_km);
    } catch (const Error& e) {
      report.notes.push_back(route_name + ": " + e.detail());
      last_failure = e.detail();
      continue;
    }

    // Link-by-link probing.
    std::vector<LinkUse> uses;
    const double t_probe = clock.now();
    try {
      for (const auto& id : route.links) {
        LinkUse use;
        const auto& l = world_.line().link(id);
        use.length_km = l.length_km();
        use.kind = std::string(to_string(l.kind));
        if (auto rec = ledger_.fresh(id, clock.now(), config_.timing.ledger_freshness_s)) {
          use.record = *rec;
          use.reused = true;
        } else {
          use.record = probe_link(id);
        }
        uses.push_back(std::move(use));
      }
    } catch (const Error& e) {
      report.timing.probe_s += clock.now() - t_probe;
      report.route = route;
      report.links = std::move(uses);
      return finish(e.code(), e.detail());
    }
    report.timing.probe_s += clock.now() - t_probe;

    // Design.
    const double t_design = clock.now();
    PlanInputs in;
    in.demand_gbps = request.demand_gbps;
    in.links = route.links;
    in.length_km = route.length_km;
    for (const auto& u : uses) {
      in.records.push_back(u.record);
      in.tilts[u.record.link_id] = world_.line().link(u.record.link_id).inventory_tilt_db_per_thz;
    }
    in.modes = modes;
    in.required_margin_db = required_margin;
    in.operational_margin_db = request.operational_margin_db;
    std::vector<PlannedChannel> plan;
    try {
      plan = select_plan(in, [&](int n) { return wavelengths_.preview(route.links, n); });
    } catch (const Error& e) {
      clock.advance(config_.timing.design_s);
      report.timing.design_s += clock.now() - t_design;
      if (e.code() != ErrorCode::DemandUnsatisfiable) return finish(e.code(), e.detail());
      report.notes.push_back(route_name + ": " + e.detail());
      last_failure = e.detail();
      report.route = route;
      report.links = std::move(uses);
      report.required_margin_db = required_margin;
      continue;
    }
    const int n = static_cast<int>(plan.size());
    if (n > world_.mux(mux_src).trx_count || n > world_.mux(mux_dst).trx_count) {
      clock.advance(config_.timing.design_s);
      report.timing.design_s += clock.now() - t_design;
      last_failure = route_name + ": the plan needs " + std::to_string(n) + " transceivers per site";
      report.notes.push_back(last_failure);
      continue;
    }
    clock.advance(config_.timing.design_s);
    report.timing.design_s += clock.now() - t_design;

    report.route = route;
    report.links = std::move(uses);
    report.required_margin_db = required_margin;

    // Configure the user muxponders and verify end to end.
    std::vector<double> freqs;
    for (const auto& c : plan) freqs.push_back(c.freq_thz);
    const double t_config = clock.now();
    try {
      wavelengths_.reserve(route.links, freqs);
      const LinePath path = world_.line().make_path(route.links, request.src);
      auto& cs = client(mux_src);
      auto& cd = client(mux_dst);
      for (int k = 0; k < n; ++k) {
        cs.admin_set(k, AdminState::Halted);
        cd.admin_set(k, AdminState::Halted);
        world_.disconnect({mux_src, k});
        world_.disconnect({mux_dst, k});
        world_.connect({mux_src, k}, {mux_dst, k}, path);
      }
      {
        ParallelRegion region(clock);
        for (int k = 0; k < n; ++k) {
          cs.configure(k, plan[static_cast<std::size_t>(k)].freq_thz, plan[static_cast<std::size_t>(k)].mode.id);
          cd.configure(k, plan[static_cast<std::size_t>(k)].freq_thz, plan[static_cast<std::size_t>(k)].mode.id);
        }
      }
      for (int k = 0; k < n; ++k) {
        cs.admin_set(k, AdminState::Up);
        cd.admin_set(k, AdminState::Up);
      }
      std::vector<BerReading> readings;
      {
        ParallelRegion region(clock);
        for (int k = 0; k < n; ++k) readings.push_back(cd.get_ber(k, config_.timing.verify_window_s));
      }
      for (int k = 0; k < n; ++k) {
        const auto& p = plan[static_cast<std::size_t>(k)];
        ChannelOutcome c;
        c.freq_thz = p.freq_thz;
        c.mode_id = p.mode.id;
        c.modulation = p.mode.modulation;
        c.line_rate_gbps = p.mode.line_rate_gbps;
        c.est_gsnr_db = p.est_gsnr_db;
        c.secured_margin_db = p.secured_margin_db;
        c.required_gsnr_db = p.mode.required_gsnr.db();
        c.measured_ber = readings[static_cast<std::size_t>(k)].ber;
        c.measured_gsnr_db = gsnr_from_ber(Ber(c.measured_ber), p.mode.modulation).db();
        c.est_q_db = q_squared_from_ber(ber_from_gsnr(GsnrDb(p.est_gsnr_db), p.mode.modulation)).db;
        c.meas_q_db = q_squared_from_ber(Ber(c.measured_ber)).db;
        c.error_db = std::abs(c.est_gsnr_db - c.measured_gsnr_db);
        report.channels.push_back(c);
      }
    } catch (const Error& e) {
      report.timing.config_s = clock.now() - t_config;
      return finish(e.code(), e.detail());
    }
    report.timing.config_s = clock.now() - t_config;
    report.timing.total_s = clock.now() - t_start;
    report.status = "ok";
    report.message.clear();
    return report;
  }
  return finish(ErrorCode::DemandUnsatisfiable, last_failure);
}

}  // namespace fastwdm

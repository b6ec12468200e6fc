#include "fastwdm/world.hpp"

#include <cmath>

#include "fastwdm/error.hpp"

namespace fastwdm {

std::string_view to_string(AdminState s) noexcept { return s == AdminState::Up ? "up" : "halted"; }

AdminState admin_state_from_string(std::string_view s) {
  if (s == "up") return AdminState::Up;
  if (s == "halted") return AdminState::Halted;
  throw Error(ErrorCode::BadRequest, "admin state must be 'up' or 'halted'");
}

World::World(LineSystem line, std::vector<MuxponderSpec> muxes, WorldTiming timing, ClockMode mode,
             double time_scale, std::uint64_t seed)
    : line_(std::move(line)), timing_(timing), clock_(mode, time_scale) {
  for (auto& spec : muxes) {
    if (spec.trx_count < 1) throw Error(ErrorCode::ConfigError, "muxponder " + spec.id + " needs trx_count >= 1");
    Mux m;
    m.trx.resize(static_cast<std::size_t>(spec.trx_count));
    for (int i = 0; i < spec.trx_count; ++i) {
      FluctuationParams fp = spec.b2b_fluctuation;
      fp.seed = mix_seed(mix_seed(seed, hash_name(spec.id)), static_cast<std::uint64_t>(i) + 1000 * fp.seed);
      m.drift.emplace_back(fp, line_.cadence());
    }
    const std::string id = spec.id;
    m.spec = std::move(spec);
    if (!muxes_.emplace(id, std::move(m)).second)
      throw Error(ErrorCode::ConfigError, "duplicate muxponder id " + id);
  }
}

World::Mux& World::mux_mut(std::string_view id) {
  auto it = muxes_.find(id);
  if (it == muxes_.end()) throw Error(ErrorCode::UnknownNode, "unknown muxponder '" + std::string(id) + "'");
  return it->second;
}

const World::Mux& World::mux_ref(std::string_view id) const {
  auto it = muxes_.find(id);
  if (it == muxes_.end()) throw Error(ErrorCode::UnknownNode, "unknown muxponder '" + std::string(id) + "'");
  return it->second;
}

TrxState& World::state_mut(const TrxEndpoint& ep) {
  auto& m = mux_mut(ep.mux);
  if (ep.trx < 0 || ep.trx >= static_cast<int>(m.trx.size()))
    throw Error(ErrorCode::BadRequest, "muxponder " + ep.mux + " has no transceiver " + std::to_string(ep.trx));
  return m.trx[static_cast<std::size_t>(ep.trx)];
}

const MuxponderSpec& World::mux(std::string_view id) const {
  std::lock_guard lock(mu_);
  return mux_ref(id).spec;
}

std::vector<std::string> World::mux_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, m] : muxes_) out.push_back(id);
  return out;
}

std::vector<std::string> World::muxes_at(std::string_view node) const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, m] : muxes_) {
    if (m.spec.node == node) out.push_back(id);
  }
  return out;
}

const TrxCharacteristics& World::characteristics(std::string_view mux_id) const {
  std::lock_guard lock(mu_);
  return mux_ref(mux_id).spec.characteristics;
}

TrxState World::state(const TrxEndpoint& ep) const {
  std::lock_guard lock(mu_);
  return const_cast<World*>(this)->state_mut(ep);
}

void World::admin_set(const TrxEndpoint& ep, AdminState s) {
  std::lock_guard lock(mu_);
  state_mut(ep).admin = s;
}

void World::configure(const TrxEndpoint& ep, double freq_thz, std::string_view mode_id) {
  {
    std::lock_guard lock(mu_);
    auto& st = state_mut(ep);
    const auto& chars = mux_ref(ep.mux).spec.characteristics;
    if (st.admin != AdminState::Halted)
      throw Error(ErrorCode::NotHalted, ep.lane() + " must be halted before configuration");
    if (!chars.in_range(freq_thz))
      throw Error(ErrorCode::FrequencyOutOfRange,
                  std::to_string(freq_thz) + " THz is outside " + chars.vendor + " range");
    if (!chars.on_grid(freq_thz))
      throw Error(ErrorCode::FrequencyOutOfRange, std::to_string(freq_thz) + " THz is not on the " +
                                                      std::to_string(chars.grid_ghz) + " GHz grid");
    if (!chars.find(mode_id))
      throw Error(ErrorCode::UnknownMode, chars.vendor + " has no mode '" + std::string(mode_id) + "'");
    st.freq_thz = std::round(freq_thz * 1e4) / 1e4;
    st.mode_id = std::string(mode_id);
    st.busy_until = clock_.lane_now(ep.lane()) + timing_.transition_s;
  }
  clock_.advance_lane(ep.lane(), timing_.transition_s);
}

void World::connect(const TrxEndpoint& a, const TrxEndpoint& b, LinePath path) {
  std::lock_guard lock(mu_);
  state_mut(a);
  state_mut(b);
  if (a == b) throw Error(ErrorCode::BadRequest, "cannot cross-connect a transceiver to itself");
  if (fabric_.count(a) || fabric_.count(b))
    throw Error(ErrorCode::BadRequest, "transceiver already cross-connected");
  fabric_[b] = CrossConnect{a, path.reversed()};
  fabric_[a] = CrossConnect{b, std::move(path)};
}

void World::disconnect(const TrxEndpoint& ep) {
  std::lock_guard lock(mu_);
  auto it = fabric_.find(ep);
  if (it == fabric_.end()) return;
  fabric_.erase(it->second.peer);
  fabric_.erase(it);
}

std::optional<TrxEndpoint> World::peer(const TrxEndpoint& ep) const {
  std::lock_guard lock(mu_);
  auto it = fabric_.find(ep);
  if (it == fabric_.end()) return std::nullopt;
  return it->second.peer;
}

GsnrDb World::true_b2b(const TrxEndpoint& ep, const TransmissionMode& m, double t) {
  auto& mx = mux_mut(ep.mux);
  double db = m.snr_trx.db();
  if (auto it = mx.spec.b2b_offset_db.find(m.id); it != mx.spec.b2b_offset_db.end()) db += it->second;
  db += mx.drift[static_cast<std::size_t>(ep.trx)].at(t);
  return GsnrDb(db);
}

GsnrDb World::true_pair_b2b(const TrxEndpoint& a, const TrxEndpoint& b, std::string_view mode_id, double t) {
  std::lock_guard lock(mu_);
  const auto& ma = mux_ref(a.mux).spec.characteristics.mode(mode_id);
  const auto& mb = mux_ref(b.mux).spec.characteristics.mode(mode_id);
  return pair_back_to_back(true_b2b(a, ma, t), true_b2b(b, mb, t));
}

std::optional<GsnrDb> World::lit_gsnr(const TrxEndpoint& rx, double t, std::string* why) {
  auto fail = [&](std::string msg) -> std::optional<GsnrDb> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  const auto& rs = state_mut(rx);
  auto it = fabric_.find(rx);
  if (it == fabric_.end()) return fail(rx.lane() + " is not cross-connected");
  const TrxEndpoint tx = it->second.peer;
  const auto& ts = state_mut(tx);
  if (!ts.configured() || ts.admin != AdminState::Up) return fail("no signal from " + tx.lane());
  if (std::llround(*ts.freq_thz * 1e4) != std::llround(*rs.freq_thz * 1e4) || *ts.mode_id != *rs.mode_id)
    return fail(tx.lane() + " and " + rx.lane() + " disagree on frequency or mode");
  const auto* mt = mux_ref(tx.mux).spec.characteristics.find(*ts.mode_id);
  const auto* mr = mux_ref(rx.mux).spec.characteristics.find(*rs.mode_id);
  if (!mt || !mr) return fail("mode not supported at both ends");
  const GsnrDb b2b = pair_back_to_back(true_b2b(tx, *mt, t), true_b2b(rx, *mr, t));
  // The path is stored oriented from rx towards tx; GSNR is direction independent.
  GsnrDb line_part = GsnrDb::noise_free();
  try {
    line_part = line_.path_line_gsnr(it->second.path, *rs.freq_thz, t, mr->baud_gbd);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FrequencyOutOfRange) throw;
    return fail("channel is blocked by the line system");
  }
  return combine_inverse({b2b, line_part});
}

std::optional<GsnrDb> World::connection_gsnr(const TrxEndpoint& rx, double t) {
  std::lock_guard lock(mu_);
  const auto& rs = state_mut(rx);
  if (!rs.configured()) return std::nullopt;
  return lit_gsnr(rx, t, nullptr);
}

BerReading World::measure(const TrxEndpoint& rx, double window_s) {
  BerReading out;
  std::optional<TrxEndpoint> tx;
  {
    std::lock_guard lock(mu_);
    const auto& rs = state_mut(rx);
    if (!rs.configured() || rs.admin != AdminState::Up)
      throw Error(ErrorCode::NotConfigured, rx.lane() + " is not configured and up");
    auto it = fabric_.find(rx);
    if (it != fabric_.end()) tx = it->second.peer;
    const double t0 = tx ? clock_.lanes_now(rx.lane(), tx->lane()) : clock_.lane_now(rx.lane());
    const auto& mode = mux_ref(rx.mux).spec.characteristics.mode(*rs.mode_id);
    double sum = 0.0;
    const auto times = window_samples(t0, window_s, line_.cadence());
    for (double t : times) {
      std::string why;
      auto g = lit_gsnr(rx, t, &why);
      if (!g) throw Error(ErrorCode::LossOfSignal, why);
      if (g->db() < timing_.squelch_gsnr_db)
        throw Error(ErrorCode::LossOfSignal, rx.lane() + " receives GSNR below squelch");
      sum += ber_from_gsnr(*g, mode.modulation).value();
    }
    out.ber = sum / static_cast<double>(times.size());
    out.window_s = window_s;
    out.mode_id = *rs.mode_id;
    out.freq_thz = *rs.freq_thz;
    out.timestamp = t0;
  }
  if (tx) {
    clock_.advance_lanes(rx.lane(), tx->lane(), window_s);
  } else {
    clock_.advance_lane(rx.lane(), window_s);
  }
  return out;
}

TelemetryReading World::telemetry(const TrxEndpoint& ep) {
  std::lock_guard lock(mu_);
  TelemetryReading r;
  r.state = state_mut(ep);
  r.timestamp = clock_.lane_now(ep.lane());
  if (r.state.configured() && r.state.admin == AdminState::Up) {
    if (auto g = lit_gsnr(ep, r.timestamp, nullptr)) r.gsnr_db = g->db();
  }
  return r;
}

}  // namespace fastwdm

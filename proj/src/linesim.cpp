#include "fastwdm/linesim.hpp"

#include <algorithm>
#include <cmath>

#include "fastwdm/error.hpp"
#include "fastwdm/kernels.hpp"

namespace fastwdm {

std::string_view to_string(LinkKind k) noexcept { return k == LinkKind::AAL ? "AAL" : "CL"; }

LinkKind link_kind_from_string(std::string_view s) {
  if (s == "AAL") return LinkKind::AAL;
  if (s == "CL") return LinkKind::CL;
  throw Error(ErrorCode::ConfigError, "link kind must be AAL or CL, got '" + std::string(s) + "'");
}

double OpticalLink::length_km() const noexcept {
  double total = 0.0;
  for (const auto& st : stages) total += st.span.length_km;
  return total;
}

std::size_t OpticalLink::amplifier_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(stages.begin(), stages.end(), [](const Stage& s) { return s.amp.has_value(); }));
}

double dbm_to_mw(double dbm) noexcept { return db_to_linear(dbm); }

namespace {

// Sum over amplifiers of P_ASE / P_ch.
double ase_inverse(const OpticalLink& link, double thz, double launch_dbm, double bandwidth_ghz) {
  const double p_ch_w = dbm_to_mw(launch_dbm) * 1e-3;
  const double hvb = kPlanckJs * thz * 1e12 * bandwidth_ghz * 1e9;
  double inv = 0.0;
  for (const auto& st : link.stages) {
    if (!st.amp) continue;
    const double g = db_to_linear(st.amp->gain_db);
    const double nf = db_to_linear(st.amp->effective_nf_db(thz));
    inv += nf * hvb * (g - 1.0) / p_ch_w;
  }
  return inv;
}

double nli_inverse(const OpticalLink& link, double launch_dbm, double loading) {
  const double p_mw = dbm_to_mw(launch_dbm);
  double inv = 0.0;
  for (const auto& st : link.stages) inv += st.span.nli_eta * loading * p_mw * p_mw;
  return inv;
}

GsnrDb from_inverse(double inv) {
  if (inv <= 0.0) return GsnrDb::noise_free();
  return GsnrDb(-linear_to_db(inv));
}

}  // namespace

GsnrDb ase_snr(const OpticalLink& link, double thz, double launch_dbm, double bandwidth_ghz) {
  return from_inverse(ase_inverse(link, thz, launch_dbm, bandwidth_ghz));
}

GsnrDb nli_snr(const OpticalLink& link, double launch_dbm, double loading) {
  return from_inverse(nli_inverse(link, launch_dbm, loading));
}

GsnrDb static_link_gsnr(const OpticalLink& link, double thz, double launch_dbm, double bandwidth_ghz,
                        double loading) {
  return from_inverse(ase_inverse(link, thz, launch_dbm, bandwidth_ghz) + nli_inverse(link, launch_dbm, loading));
}

OpticalLink calibrate_link(const OpticalLink& link, GsnrDb target, double thz, double launch_dbm,
                           double bandwidth_ghz, double loading) {
  if (target.is_noise_free())
    throw Error(ErrorCode::Unachievable, "link " + link.id + ": a noise-free target cannot be calibrated");
  if (target.is_zero_snr())
    throw Error(ErrorCode::Unachievable, "link " + link.id + ": zero-SNR target");
  const double ase = ase_inverse(link, thz, launch_dbm, bandwidth_ghz);
  const double nli = nli_inverse(link, launch_dbm, loading);
  const double wanted = target.inverse_linear() - nli;
  if (ase <= 0.0)
    throw Error(ErrorCode::Unachievable, "link " + link.id + " has no amplifier noise to scale");
  if (wanted <= 0.0)
    throw Error(ErrorCode::Unachievable,
                "link " + link.id + ": target " + std::to_string(target.db()) + " dB is above the NLI bound " +
                    std::to_string(nli_snr(link, launch_dbm, loading).db()) + " dB");
  const double scale_db = linear_to_db(wanted / ase);
  OpticalLink out = link;
  for (auto& st : out.stages) {
    if (!st.amp) continue;
    st.amp->noise_figure_db += scale_db;
    if (st.amp->noise_figure_db < 0.0)
      throw Error(ErrorCode::Unachievable, "link " + link.id + ": target needs a negative noise figure (" +
                                               std::to_string(st.amp->noise_figure_db) + " dB)");
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_name(std::string_view name) noexcept {
  // FNV-1a; std::hash is not stable across implementations.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

OuPath::OuPath(FluctuationParams params, double cadence_s) : params_(params), cadence_(cadence_s), rng_(params.seed) {
  if (params.sigma_db < 0.0) throw Error(ErrorCode::ConfigError, "fluctuation sigma must be >= 0");
  if (!(params.tau_s > 0.0)) throw Error(ErrorCode::ConfigError, "fluctuation tau must be > 0");
  if (!(cadence_s > 0.0)) throw Error(ErrorCode::ConfigError, "cadence must be > 0");
  decay_ = std::exp(-cadence_ / params.tau_s);
  innovation_ = params.sigma_db * std::sqrt(1.0 - decay_ * decay_);
}

void OuPath::extend_to(double t) {
  if (params_.sigma_db == 0.0) return;
  const auto k = static_cast<std::size_t>(std::floor(std::max(t, 0.0) / cadence_ + 1e-9));
  if (cache_.empty()) cache_.push_back(params_.sigma_db * normal_(rng_));
  while (cache_.size() <= k) cache_.push_back(cache_.back() * decay_ + innovation_ * normal_(rng_));
}

double OuPath::at(double t) {
  if (params_.sigma_db == 0.0) return 0.0;
  extend_to(t);
  const auto k = static_cast<std::size_t>(std::floor(std::max(t, 0.0) / cadence_ + 1e-9));
  return cache_[k];
}

LinePath LinePath::reversed() const {
  LinePath r;
  r.links.assign(links.rbegin(), links.rend());
  r.a_termination = z_termination;
  r.z_termination = a_termination;
  return r;
}

LineSystem::LineSystem(ChannelPlan plan, std::vector<Node> nodes, std::vector<OpticalLink> links,
                       std::uint64_t seed, double cadence_s)
    : plan_(std::move(plan)), nodes_(std::move(nodes)), links_(std::move(links)), cadence_(cadence_s) {
  paths_.reserve(links_.size());
  for (const auto& l : links_) {
    FluctuationParams fp = l.fluctuation;
    fp.seed = mix_seed(mix_seed(seed, hash_name(l.id)), fp.seed);
    paths_.emplace_back(fp, cadence_);
  }
}

std::size_t LineSystem::index_of(std::string_view link_id) const {
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (links_[i].id == link_id) return i;
  }
  throw Error(ErrorCode::UnknownLink, "unknown link '" + std::string(link_id) + "'");
}

const OpticalLink& LineSystem::link(std::string_view id) const { return links_[index_of(id)]; }

const Node& LineSystem::node(std::string_view id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return n;
  }
  throw Error(ErrorCode::UnknownNode, "unknown node '" + std::string(id) + "'");
}

GsnrDb LineSystem::static_gsnr(std::string_view link_id, double thz, double bandwidth_ghz) const {
  return static_link_gsnr(link(link_id), thz, plan_.launch_power_dbm, bandwidth_ghz, plan_.nli_loading);
}

GsnrDb LineSystem::link_gsnr(std::string_view link_id, double thz, double t, double bandwidth_ghz) {
  if (!plan_.in_band(thz))
    throw Error(ErrorCode::FrequencyOutOfRange, std::to_string(thz) + " THz is outside the line band");
  const auto i = index_of(link_id);
  const GsnrDb base = static_link_gsnr(links_[i], thz, plan_.launch_power_dbm, bandwidth_ghz, plan_.nli_loading);
  if (base.is_noise_free()) return base;
  return GsnrDb(base.db() + paths_[i].at(t));
}

LinePath LineSystem::make_path(const std::vector<std::string>& link_ids, std::string_view a_node) const {
  LinePath p;
  std::string at(a_node);
  const Node& first = node(at);
  if (first.is_pop) p.a_termination = first.add_drop_snr;
  for (const auto& id : link_ids) {
    const auto& l = link(id);
    if (l.a_node == at) {
      at = l.z_node;
    } else if (l.z_node == at) {
      at = l.a_node;
    } else {
      throw Error(ErrorCode::MissingLink, "link " + id + " does not touch node " + at);
    }
    p.links.push_back(id);
  }
  const Node& last = node(at);
  if (last.is_pop) p.z_termination = last.add_drop_snr;
  return p;
}

GsnrDb LineSystem::path_line_gsnr(const LinePath& path, double thz, double t, double bandwidth_ghz) {
  double inv = path.a_termination.inverse_linear() + path.z_termination.inverse_linear();
  for (const auto& id : path.links) inv += link_gsnr(id, thz, t, bandwidth_ghz).inverse_linear();
  return from_inverse(inv);
}

void LineSystem::prepare(double t) { kernels::extend_paths_parallel(paths_, t); }

std::vector<double> window_samples(double t0, double window_s, double cadence_s) {
  if (!(window_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "measurement window must be > 0");
  const auto n = std::max<long>(1, static_cast<long>(std::floor(window_s / cadence_s + 1e-9)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) out.push_back(t0 + static_cast<double>(k) * cadence_s);
  return out;
}

double mean_ber(LineSystem& line, const LinePath& path, const TrxSnrFn& trx_b2b, Modulation format, double thz,
                double t0, double window_s, double bandwidth_ghz) {
  const auto times = window_samples(t0, window_s, line.cadence());
  double sum = 0.0;
  for (double t : times) {
    const GsnrDb line_part = path.links.empty() && path.a_termination.is_noise_free() &&
                                     path.z_termination.is_noise_free()
                                 ? GsnrDb::noise_free()
                                 : line.path_line_gsnr(path, thz, t, bandwidth_ghz);
    sum += ber_from_gsnr(combine_inverse({trx_b2b(t), line_part}), format).value();
  }
  return sum / static_cast<double>(times.size());
}

Ber measure_ber(LineSystem& line, const LinePath& path, const TrxCharacteristics& tx, const TrxCharacteristics& rx,
                std::string_view mode_id, double thz, double window_s, VirtualClock& clock) {
  if (!tx.in_range(thz) || !rx.in_range(thz))
    throw Error(ErrorCode::FrequencyOutOfRange, std::to_string(thz) + " THz is outside a transceiver range");
  const auto* mt = tx.find(mode_id);
  const auto* mr = rx.find(mode_id);
  if (!mt || !mr)
    throw Error(ErrorCode::ModeUnsupported, "mode '" + std::string(mode_id) + "' is not offered by both ends");
  const GsnrDb b2b = pair_back_to_back(mt->snr_trx, mr->snr_trx);
  const double ber = mean_ber(line, path, [b2b](double) { return b2b; }, mt->modulation, thz, clock.now(), window_s,
                              mt->baud_gbd);
  clock.advance(window_s);
  return Ber(ber);
}

}  // namespace fastwdm

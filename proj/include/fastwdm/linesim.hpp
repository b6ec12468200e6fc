#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fastwdm/channel_plan.hpp"
#include "fastwdm/clock.hpp"
#include "fastwdm/mode.hpp"
#include "fastwdm/qot.hpp"

namespace fastwdm {

inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kDefaultPivotThz = 191.5;
inline constexpr double kDefaultCadenceS = 5.0;

struct FiberSpan {
  double length_km = 0.0;
  double loss_db_per_km = 0.0;
  /// Connectors, ROADM pass-through, spool patching.
  double lumped_loss_db = 0.0;
  /// 1/mW^2 per span.
  double nli_eta = 0.0;

  double loss_db() const noexcept { return length_km * loss_db_per_km + lumped_loss_db; }
};

struct Amplifier {
  double gain_db = 0.0;
  double noise_figure_db = 5.0;
  /// Gain slope. Positive tilt lowers the effective NF (raises GSNR) above the pivot.
  double tilt_db_per_thz = 0.0;
  double pivot_thz = kDefaultPivotThz;

  double effective_nf_db(double thz) const noexcept {
    return noise_figure_db - tilt_db_per_thz * (thz - pivot_thz);
  }
};

struct Stage {
  FiberSpan span;
  std::optional<Amplifier> amp;
};

enum class LinkKind { AAL, CL };

std::string_view to_string(LinkKind k) noexcept;
LinkKind link_kind_from_string(std::string_view s);

struct FluctuationParams {
  double sigma_db = 0.0;
  double tau_s = 600.0;
  std::uint64_t seed = 0;
};

struct OpticalLink {
  std::string id;
  LinkKind kind = LinkKind::AAL;
  std::string a_node;
  std::string z_node;
  std::vector<Stage> stages;
  FluctuationParams fluctuation;
  /// Tilt the operator's inventory records for this link, used by the
  /// controller to project a probe result to other wavelengths.
  double inventory_tilt_db_per_thz = 0.0;

  double length_km() const noexcept;
  std::size_t amplifier_count() const noexcept;
};

/// Shorthand for 1 mW * 10^(dBm/10).
double dbm_to_mw(double dbm) noexcept;

GsnrDb ase_snr(const OpticalLink& link, double thz, double launch_dbm, double bandwidth_ghz = 64.0);
GsnrDb nli_snr(const OpticalLink& link, double launch_dbm, double loading = 1.0);
/// Time-invariant part of the link GSNR (no fluctuation).
GsnrDb static_link_gsnr(const OpticalLink& link, double thz, double launch_dbm, double bandwidth_ghz = 64.0,
                        double loading = 1.0);

/// Scales every amplifier noise figure by one common linear factor so that
/// static_link_gsnr at `thz` equals `target`. Throws Unachievable.
OpticalLink calibrate_link(const OpticalLink& link, GsnrDb target, double thz, double launch_dbm,
                           double bandwidth_ghz = 64.0, double loading = 1.0);

/// Mixes a base seed with a stream id (splitmix64 finaliser).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept;
std::uint64_t hash_name(std::string_view name) noexcept;

/// Stationary Ornstein-Uhlenbeck process in dB, sampled on a fixed cadence
/// grid with the exact discretisation and held constant between grid
/// points. Samples are generated lazily and cached, so any query order gives
/// the same path.
class OuPath {
 public:
  OuPath() = default;
  OuPath(FluctuationParams params, double cadence_s = kDefaultCadenceS);

  double at(double t);
  double sigma() const noexcept { return params_.sigma_db; }
  /// Generates samples up to time t (inclusive).
  void extend_to(double t);
  const std::vector<double>& samples() const noexcept { return cache_; }
  double cadence() const noexcept { return cadence_; }

 private:
  FluctuationParams params_{};
  double cadence_ = kDefaultCadenceS;
  double decay_ = 0.0;
  double innovation_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<double> cache_;
};

/// A signal path between two terminals: links in order plus the add/drop
/// penalty at each end (noise-free when the end is a user site).
struct LinePath {
  std::vector<std::string> links;
  GsnrDb a_termination = GsnrDb::noise_free();
  GsnrDb z_termination = GsnrDb::noise_free();

  LinePath reversed() const;
};

struct Node {
  std::string id;
  bool is_pop = false;
  /// SNR of the local add/drop structure seen by a channel terminating here.
  GsnrDb add_drop_snr = GsnrDb::noise_free();
};

/// Ground truth optical line system.
class LineSystem {
 public:
  LineSystem() = default;
  LineSystem(ChannelPlan plan, std::vector<Node> nodes, std::vector<OpticalLink> links, std::uint64_t seed,
             double cadence_s = kDefaultCadenceS);

  const ChannelPlan& plan() const noexcept { return plan_; }
  const std::vector<OpticalLink>& links() const noexcept { return links_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const OpticalLink& link(std::string_view id) const;
  const Node& node(std::string_view id) const;
  double cadence() const noexcept { return cadence_; }

  GsnrDb static_gsnr(std::string_view link_id, double thz, double bandwidth_ghz = 64.0) const;
  /// Time-dependent truth. Throws FrequencyOutOfRange outside the band.
  GsnrDb link_gsnr(std::string_view link_id, double thz, double t, double bandwidth_ghz = 64.0);

  /// Path over the given links starting at node a_node. Add/drop penalties
  /// are applied at POP ends. Throws UnknownLink / MissingLink when the links
  /// do not chain.
  LinePath make_path(const std::vector<std::string>& link_ids, std::string_view a_node) const;
  /// GSNR of the line part of a path (links plus terminations).
  GsnrDb path_line_gsnr(const LinePath& path, double thz, double t, double bandwidth_ghz = 64.0);

  /// Generates fluctuation samples for all links up to time t. The per-link
  /// generation runs in parallel.
  void prepare(double t);

 private:
  std::size_t index_of(std::string_view link_id) const;

  ChannelPlan plan_;
  std::vector<Node> nodes_;
  std::vector<OpticalLink> links_;
  std::vector<OuPath> paths_;
  double cadence_ = kDefaultCadenceS;
};

/// Back-to-back SNR of a transceiver pair as a function of time.
using TrxSnrFn = std::function<GsnrDb(double)>;

/// Sample times used for a measurement window starting at t0.
std::vector<double> window_samples(double t0, double window_s, double cadence_s);

/// Mean BER over `window_s` seconds of samples at the line cadence starting
/// at t0. An empty path gives the back-to-back BER.
double mean_ber(LineSystem& line, const LinePath& path, const TrxSnrFn& trx_b2b, Modulation format, double thz,
                double t0, double window_s, double bandwidth_ghz = 64.0);

/// Measurement between two transceivers using their declared back-to-back
/// SNR. Advances the clock by the window. Throws FrequencyOutOfRange or
/// ModeUnsupported.
Ber measure_ber(LineSystem& line, const LinePath& path, const TrxCharacteristics& tx,
                const TrxCharacteristics& rx, std::string_view mode_id, double thz, double window_s,
                VirtualClock& clock);

}  // namespace fastwdm

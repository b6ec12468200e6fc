#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fastwdm/clock.hpp"
#include "fastwdm/linesim.hpp"
#include "fastwdm/mode.hpp"

namespace fastwdm {

struct TrxEndpoint {
  std::string mux;
  int trx = 0;

  std::string lane() const { return mux + "#" + std::to_string(trx); }
  friend auto operator<=>(const TrxEndpoint&, const TrxEndpoint&) = default;
};

enum class AdminState { Up, Halted };

std::string_view to_string(AdminState s) noexcept;
AdminState admin_state_from_string(std::string_view s);

struct TrxState {
  AdminState admin = AdminState::Halted;
  std::optional<double> freq_thz;
  std::optional<std::string> mode_id;
  double busy_until = 0.0;

  bool configured() const noexcept { return freq_thz.has_value() && mode_id.has_value(); }
};

struct MuxponderSpec {
  std::string id;
  std::string node;
  TrxCharacteristics characteristics;
  int trx_count = 2;
  /// True minus declared back-to-back SNR per mode id.
  std::map<std::string, double> b2b_offset_db;
  /// Drift of the true back-to-back SNR (per transceiver).
  FluctuationParams b2b_fluctuation;
};

struct WorldTiming {
  double transition_s = 60.0;
  double squelch_gsnr_db = 5.0;
};

struct BerReading {
  double ber = 0.0;
  double window_s = 0.0;
  std::string mode_id;
  double freq_thz = 0.0;
  double timestamp = 0.0;
};

struct TelemetryReading {
  TrxState state;
  std::optional<double> gsnr_db;
  double timestamp = 0.0;
};

/// Everything the agents and the fabric controller act on: the line system,
/// the muxponders, cross-connects between transceivers, and the clock. All
/// access is serialised by one mutex.
class World {
 public:
  World(LineSystem line, std::vector<MuxponderSpec> muxes, WorldTiming timing = {},
        ClockMode mode = ClockMode::Virtual, double time_scale = 1.0, std::uint64_t seed = 0);

  VirtualClock& clock() noexcept { return clock_; }
  const LineSystem& line() const noexcept { return line_; }
  LineSystem& line() noexcept { return line_; }
  const WorldTiming& timing() const noexcept { return timing_; }

  const MuxponderSpec& mux(std::string_view id) const;
  std::vector<std::string> mux_ids() const;
  /// Muxponders located at a node, in id order.
  std::vector<std::string> muxes_at(std::string_view node) const;

  const TrxCharacteristics& characteristics(std::string_view mux_id) const;
  TrxState state(const TrxEndpoint& ep) const;

  void admin_set(const TrxEndpoint& ep, AdminState s);
  /// Throws NotHalted, FrequencyOutOfRange, UnknownMode. Charges the
  /// transition delay on the endpoint's lane.
  void configure(const TrxEndpoint& ep, double freq_thz, std::string_view mode_id);
  /// Measures the signal arriving at `rx`. Throws NotConfigured or
  /// LossOfSignal. Advances both ends' lanes by the window.
  BerReading measure(const TrxEndpoint& rx, double window_s);
  TelemetryReading telemetry(const TrxEndpoint& ep);

  /// Cross-connect two transceivers over a line path (a side = `a`).
  void connect(const TrxEndpoint& a, const TrxEndpoint& b, LinePath path);
  void disconnect(const TrxEndpoint& ep);
  std::optional<TrxEndpoint> peer(const TrxEndpoint& ep) const;

  /// True back-to-back SNR of the pair at time t (declared + offset + drift).
  GsnrDb true_pair_b2b(const TrxEndpoint& a, const TrxEndpoint& b, std::string_view mode_id, double t);
  /// GSNR of the connection terminating at rx at time t; nullopt if not lit.
  std::optional<GsnrDb> connection_gsnr(const TrxEndpoint& rx, double t);

 private:
  struct Mux {
    MuxponderSpec spec;
    std::vector<TrxState> trx;
    std::vector<OuPath> drift;
  };
  struct CrossConnect {
    TrxEndpoint peer;
    LinePath path;  // oriented from this endpoint to the peer
  };

  Mux& mux_mut(std::string_view id);
  const Mux& mux_ref(std::string_view id) const;
  TrxState& state_mut(const TrxEndpoint& ep);
  GsnrDb true_b2b(const TrxEndpoint& ep, const TransmissionMode& m, double t);
  std::optional<GsnrDb> lit_gsnr(const TrxEndpoint& rx, double t, std::string* why);

  mutable std::mutex mu_;
  LineSystem line_;
  std::map<std::string, Mux, std::less<>> muxes_;
  std::map<TrxEndpoint, CrossConnect> fabric_;
  WorldTiming timing_;
  VirtualClock clock_;
};

}  // namespace fastwdm

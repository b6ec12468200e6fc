#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fastwdm/ledger.hpp"
#include "fastwdm/mode.hpp"
#include "fastwdm/netgraph.hpp"
#include "fastwdm/transport.hpp"
#include "fastwdm/world.hpp"

namespace fastwdm {

struct ProvisioningRequest {
  std::string src;
  std::string dst;
  double demand_gbps = 0.0;
  /// Extra headroom on top of the margin table.
  double operational_margin_db = 0.0;

  /// Throws InvalidArgument for a non-positive demand or margin < 0.
  void validate() const;
};

struct ProbeSettings {
  double freq_thz = 191.5;
  std::string primary_mode = "400G-DP16QAM-64GBd";
  std::string fallback_mode = "200G-DPQPSK-64GBd";
  /// A probe reading above this BER is not trusted.
  double ber_ceiling = 1e-2;
  double window_s = 30.0;
};

struct ProvisionTiming {
  double gather_s = 0.5;
  double design_s = 0.5;
  double verify_window_s = 20.0;
  double ledger_freshness_s = 3600.0;
};

struct ProvisionerConfig {
  ProbeSettings probe;
  ProvisionTiming timing;
  MarginTable margins = MarginTable::reference();
  RoutingPolicy routing;
};

/// Line GSNR of a record moved from its probe frequency to `thz` with the
/// link's inventory tilt.
double project_line_gsnr(const LinkGsnrRecord& r, double thz, double tilt_db_per_thz);

/// 1/GSNR_EtE = 1/SNR_TRx + sum over links of 1/GSNR_link. With a
/// frequency, each record is projected there using `tilts` (link id ->
/// dB/THz). Throws MissingLink.
GsnrDb estimate_ete(const std::vector<LinkGsnrRecord>& records, const std::vector<std::string>& links,
                    GsnrDb trx_b2b, std::optional<double> thz = std::nullopt,
                    const std::map<std::string, double>& tilts = {});

struct PlannedChannel {
  double freq_thz = 0.0;
  TransmissionMode mode;
  double est_gsnr_db = 0.0;
  /// est - required GSNR of the mode.
  double secured_margin_db = 0.0;
};

struct PlanInputs {
  double demand_gbps = 0.0;
  std::vector<std::string> links;
  double length_km = 0.0;
  std::vector<LinkGsnrRecord> records;
  std::map<std::string, double> tilts;
  /// Modes both user transceivers offer, with the pair back-to-back SNR.
  std::vector<TransmissionMode> modes;
  double required_margin_db = 0.0;
  double operational_margin_db = 0.0;
};

/// Fewest channels first, then the largest worst-channel secured margin,
/// then lowest frequencies, then mode id. `channels_for(n)` returns the
/// first-fit frequencies for n channels. Throws DemandUnsatisfiable with the
/// best option's shortfall.
std::vector<PlannedChannel> select_plan(const PlanInputs& in,
                                        const std::function<std::vector<double>(int)>& channels_for);

struct ChannelOutcome {
  double freq_thz = 0.0;
  std::string mode_id;
  Modulation modulation = Modulation::QAM16;
  double line_rate_gbps = 0.0;
  double est_gsnr_db = 0.0;
  double secured_margin_db = 0.0;
  double required_gsnr_db = 0.0;
  double measured_ber = 0.0;
  double measured_gsnr_db = 0.0;
  double est_q_db = 0.0;
  double meas_q_db = 0.0;
  double error_db = 0.0;
};

struct TimingBreakdown {
  double gather_s = 0.0;
  double probe_s = 0.0;
  double design_s = 0.0;
  double config_s = 0.0;
  double total_s = 0.0;
};

struct LinkUse {
  LinkGsnrRecord record;
  bool reused = false;
  double length_km = 0.0;
  std::string kind;
};

struct ProvisioningReport {
  ProvisioningRequest request;
  std::string status = "ok";  // "ok" or an error code name
  std::string message;
  std::optional<RouteCandidate> route;
  double required_margin_db = 0.0;
  std::vector<LinkUse> links;
  std::vector<ChannelOutcome> channels;
  std::vector<std::string> notes;
  TimingBreakdown timing;

  bool ok() const noexcept { return status == "ok"; }
};

/// Controller. Talks to muxponders only through agent clients; cross-connects
/// go through the world's fabric.
class Provisioner {
 public:
  Provisioner(World& world, DcxGraph graph, std::map<std::string, AgentClient*> clients,
              WavelengthLedger& wavelengths, LinkLedger& ledger, ProvisionerConfig config);

  const ProvisionerConfig& config() const noexcept { return config_; }

  /// Probes one link with the probe pair at its two ends and appends the
  /// record. Throws ProbeFailed when neither probe mode gives a usable BER.
  LinkGsnrRecord probe_link(const std::string& link_id);

  ProvisioningReport provision(const ProvisioningRequest& request);

 private:
  AgentClient& client(const std::string& mux_id);
  TrxEndpoint probe_endpoint(const std::string& node);
  std::string mux_at(const std::string& node) const;
  std::optional<BerReading> try_probe(const TrxEndpoint& a, const TrxEndpoint& z, const std::string& mode_id);

  World& world_;
  DcxGraph graph_;
  std::map<std::string, AgentClient*> clients_;
  WavelengthLedger& wavelengths_;
  LinkLedger& ledger_;
  ProvisionerConfig config_;
};

}  // namespace fastwdm

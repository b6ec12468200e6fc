#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fastwdm/agent.hpp"
#include "fastwdm/ledger.hpp"
#include "fastwdm/linesim.hpp"
#include "fastwdm/netgraph.hpp"
#include "fastwdm/provision.hpp"
#include "fastwdm/transport.hpp"
#include "fastwdm/world.hpp"
#include "json.hpp"

namespace fastwdm {

/// How a link's calibration target is to be read.
enum class CalibrationReference {
  /// The target is the link GSNR itself.
  Line,
  /// The target is what a standalone probe of the link observes, i.e. it
  /// includes the add/drop terminations at the link's POP ends.
  Probe,
};

struct LinkCalibration {
  double target_gsnr_db = 0.0;
  double freq_thz = 191.5;
  CalibrationReference reference = CalibrationReference::Line;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  ChannelPlan plan;
  std::vector<Node> nodes;
  /// Links after calibration.
  std::vector<OpticalLink> links;
  std::map<std::string, LinkCalibration> calibrations;
  std::map<std::string, TrxCharacteristics> vendors;
  std::vector<MuxponderSpec> muxes;
  ProvisionerConfig provisioner;
  WorldTiming world_timing;
  double cadence_s = kDefaultCadenceS;
  DcxGraph graph;
  std::optional<ProvisioningRequest> request;
};

/// Strict parse: unknown fields, dangling references and invalid values
/// throw ConfigError.
Scenario parse_scenario(const nlohmann::json& j);
/// Throws ConfigError if the file is missing or is not valid JSON.
Scenario load_scenario(const std::filesystem::path& path);

/// Directory holding the bundled scenarios.
std::filesystem::path bundled_scenario_dir();

/// A runnable instance of a scenario: world, one loopback agent per
/// muxponder, the controller and its ledgers.
class Testbed {
 public:
  explicit Testbed(const Scenario& scenario, ClockMode mode = ClockMode::Virtual, double time_scale = 1.0,
                   std::optional<std::filesystem::path> ledger_path = std::nullopt);
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  const Scenario& scenario() const noexcept { return scenario_; }
  World& world() noexcept { return *world_; }
  Agent& agent(const std::string& mux_id);
  AgentClient& client(const std::string& mux_id);
  Provisioner& provisioner() noexcept { return *provisioner_; }
  LinkLedger& ledger() noexcept { return *ledger_; }
  WavelengthLedger& wavelengths() noexcept { return *wavelengths_; }

  /// Replaces the controller's connection to an agent with one that always fails.
  void make_unreachable(const std::string& mux_id);
  /// Serves every agent on a loopback TCP port and reconnects the
  /// controller through sockets. Returns mux id -> port.
  std::map<std::string, std::uint16_t> serve_over_tcp();

 private:
  void build_provisioner();

  Scenario scenario_;
  std::unique_ptr<World> world_;
  std::map<std::string, std::unique_ptr<Agent>> agents_;
  std::map<std::string, std::unique_ptr<AgentServer>> servers_;
  std::map<std::string, std::unique_ptr<AgentClient>> clients_;
  std::unique_ptr<LinkLedger> ledger_;
  std::unique_ptr<WavelengthLedger> wavelengths_;
  std::unique_ptr<Provisioner> provisioner_;
};

}  // namespace fastwdm

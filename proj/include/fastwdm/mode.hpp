#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fastwdm/qot.hpp"
#include "json.hpp"

namespace fastwdm {

/// One mode-catalog entry as exchanged with the controller.
struct TransmissionMode {
  std::string id;
  Modulation modulation = Modulation::QPSK;
  double baud_gbd = 64.0;
  double line_rate_gbps = 0.0;
  /// Back-to-back SNR of the transceiver in this mode.
  GsnrDb snr_trx;
  /// Minimum end-to-end GSNR for error-free post-FEC operation.
  GsnrDb required_gsnr;

  void validate() const;
};

inline constexpr int kCharacteristicsSchema = 1;
inline constexpr double kItuAnchorThz = 193.1;

/// Vendor-declared transceiver characteristics (schema 1). Frequencies are
/// absolute THz; channel indices are vendor-specific and only appear in
/// channel_frequency().
struct TrxCharacteristics {
  std::string vendor;
  std::string form_factor;
  double freq_min_thz = 0.0;
  double freq_max_thz = 0.0;
  double grid_ghz = 100.0;
  std::vector<TransmissionMode> modes;

  const TransmissionMode* find(std::string_view mode_id) const noexcept;
  /// Throws UnknownMode.
  const TransmissionMode& mode(std::string_view mode_id) const;

  bool in_range(double thz) const noexcept;
  bool on_grid(double thz) const noexcept;
  /// Vendor channel n (1-based, channel 1 = freq_min) to absolute THz.
  double channel_frequency(int index) const;

  void validate() const;
};

nlohmann::json to_json(const TransmissionMode& m);
TransmissionMode mode_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrxCharacteristics& c);
TrxCharacteristics characteristics_from_json(const nlohmann::json& j);

/// Back-to-back SNR of a transmitter/receiver pair from the two modules'
/// per-module values: 1/SNR = (1/a + 1/b) / 2. Identical modules give a.
GsnrDb pair_back_to_back(GsnrDb a, GsnrDb b);

/// Modes offered by both transceivers (matched by id, format, baud and line
/// rate). Uses the larger required GSNR and the pair back-to-back SNR.
std::vector<TransmissionMode> common_modes(const TrxCharacteristics& a, const TrxCharacteristics& b);

/// Reference catalog with 400G DP-16QAM and 200G DP-QPSK at 64 GBd.
TrxCharacteristics reference_catalog(std::string vendor, double freq_min_thz, double freq_max_thz,
                                     double grid_ghz);

}  // namespace fastwdm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fastwdm {

/// Integer key for a frequency (units of 100 MHz) so set membership never
/// depends on floating-point equality.
std::int64_t channel_key(double thz) noexcept;
double channel_thz(std::int64_t key) noexcept;

struct NamedChannel {
  std::string name;
  double thz = 0.0;
};

/// Contiguous block of on-grid background channels, inclusive at both ends.
struct ChannelBlock {
  double start_thz = 0.0;
  double end_thz = 0.0;
};

struct ChannelPlan {
  double grid_ghz = 100.0;
  double grid_anchor_thz = 193.1;
  double band_low_thz = 191.3;
  double band_high_thz = 196.1;
  std::vector<NamedChannel> probe_channels;
  /// First-fit preference order for service wavelengths, tried before the
  /// ascending grid scan.
  std::vector<double> service_channels;
  std::vector<ChannelBlock> background;
  double launch_power_dbm = 4.0;
  double reference_bandwidth_ghz = 64.0;
  /// Multiplier applied to every span's NLI coefficient for the channel load.
  double nli_loading = 1.0;

  /// Probe channels a..e and the two background blocks (25 channels) at
  /// 100 GHz spacing with +4 dBm per channel.
  static ChannelPlan reference();

  bool on_grid(double thz) const noexcept;
  bool in_band(double thz) const noexcept;
  std::vector<double> grid_channels() const;
  std::vector<double> background_channels() const;
  /// Service preference list followed by the remaining grid channels in
  /// ascending order, without duplicates.
  std::vector<double> assignment_order() const;

  /// Throws ConfigError when a channel is off-grid, out of band, or a
  /// service/probe channel collides with the background.
  void validate() const;
};

}  // namespace fastwdm

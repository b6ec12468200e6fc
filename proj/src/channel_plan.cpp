#include "fastwdm/channel_plan.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "fastwdm/error.hpp"

namespace fastwdm {

std::int64_t channel_key(double thz) noexcept { return std::llround(thz * 1e4); }

double channel_thz(std::int64_t key) noexcept { return static_cast<double>(key) / 1e4; }

ChannelPlan ChannelPlan::reference() {
  ChannelPlan plan;
  plan.probe_channels = {
      {"a", 191.5}, {"b", 192.1}, {"c", 194.6}, {"d", 193.3}, {"e", 196.0},
  };
  for (const auto& ch : plan.probe_channels) plan.service_channels.push_back(ch.thz);
  plan.background = {{193.4, 194.5}, {194.7, 195.9}};
  return plan;
}

bool ChannelPlan::on_grid(double thz) const noexcept {
  const double steps = (thz - grid_anchor_thz) * 1000.0 / grid_ghz;
  return std::abs(steps - std::round(steps)) < 1e-6;
}

bool ChannelPlan::in_band(double thz) const noexcept {
  return thz >= band_low_thz - 1e-9 && thz <= band_high_thz + 1e-9;
}

std::vector<double> ChannelPlan::grid_channels() const {
  std::vector<double> out;
  const double step = grid_ghz / 1000.0;
  const auto first = static_cast<long>(std::ceil((band_low_thz - grid_anchor_thz) / step - 1e-9));
  const auto last = static_cast<long>(std::floor((band_high_thz - grid_anchor_thz) / step + 1e-9));
  for (long k = first; k <= last; ++k) {
    out.push_back(channel_thz(channel_key(grid_anchor_thz + static_cast<double>(k) * step)));
  }
  return out;
}

std::vector<double> ChannelPlan::background_channels() const {
  std::vector<double> out;
  const double step = grid_ghz / 1000.0;
  for (const auto& block : background) {
    const auto n = static_cast<long>(std::llround((block.end_thz - block.start_thz) / step));
    for (long k = 0; k <= n; ++k) {
      out.push_back(channel_thz(channel_key(block.start_thz + static_cast<double>(k) * step)));
    }
  }
  return out;
}

std::vector<double> ChannelPlan::assignment_order() const {
  std::vector<double> out;
  std::set<std::int64_t> seen;
  for (double f : service_channels) {
    if (seen.insert(channel_key(f)).second) out.push_back(f);
  }
  for (double f : grid_channels()) {
    if (seen.insert(channel_key(f)).second) out.push_back(f);
  }
  return out;
}

void ChannelPlan::validate() const {
  if (!(grid_ghz > 0.0)) throw Error(ErrorCode::ConfigError, "grid_ghz must be > 0");
  if (!(band_low_thz < band_high_thz)) throw Error(ErrorCode::ConfigError, "empty band");
  if (!(reference_bandwidth_ghz > 0.0))
    throw Error(ErrorCode::ConfigError, "reference_bandwidth_ghz must be > 0");
  if (!(nli_loading >= 0.0)) throw Error(ErrorCode::ConfigError, "nli_loading must be >= 0");

  auto check = [&](double f, const std::string& what) {
    if (!on_grid(f)) throw Error(ErrorCode::ConfigError, what + " " + std::to_string(f) + " THz is off-grid");
    if (!in_band(f)) throw Error(ErrorCode::ConfigError, what + " " + std::to_string(f) + " THz is out of band");
  };
  std::set<std::int64_t> bg;
  for (const auto& block : background) {
    if (block.end_thz < block.start_thz) throw Error(ErrorCode::ConfigError, "background block reversed");
  }
  for (double f : background_channels()) {
    check(f, "background channel");
    if (!bg.insert(channel_key(f)).second)
      throw Error(ErrorCode::ConfigError, "background channels overlap at " + std::to_string(f));
  }
  for (const auto& ch : probe_channels) {
    check(ch.thz, "probe channel " + ch.name);
    if (bg.count(channel_key(ch.thz)))
      throw Error(ErrorCode::ConfigError, "probe channel " + ch.name + " collides with background");
  }
  for (double f : service_channels) {
    check(f, "service channel");
    if (bg.count(channel_key(f)))
      throw Error(ErrorCode::ConfigError, "service channel " + std::to_string(f) + " collides with background");
  }
}

}  // namespace fastwdm

#include "fastwdm/clock.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fastwdm/error.hpp"

namespace fastwdm {

VirtualClock::VirtualClock(ClockMode mode, double time_scale) : mode_(mode), time_scale_(time_scale) {
  if (!(time_scale >= 0.0)) throw Error(ErrorCode::InvalidArgument, "time_scale must be >= 0");
}

double VirtualClock::now() const {
  std::lock_guard lock(mu_);
  return now_;
}

double VirtualClock::lane_now(std::string_view lane) const {
  std::lock_guard lock(mu_);
  if (depth_ == 0) return now_;
  auto it = lanes_.find(lane);
  return it == lanes_.end() ? region_start_ : it->second;
}

double VirtualClock::lanes_now(std::string_view a, std::string_view b) const {
  return std::max(lane_now(a), lane_now(b));
}

void VirtualClock::advance(double seconds) {
  if (!(seconds >= 0.0)) throw Error(ErrorCode::InvalidArgument, "clock cannot move backwards");
  {
    std::lock_guard lock(mu_);
    if (depth_ > 0) {
      // Unlaned work inside a region delays every lane.
      for (auto& [name, t] : lanes_) t += seconds;
      region_start_ += seconds;
      return;
    }
    now_ += seconds;
  }
  pace(seconds);
}

void VirtualClock::advance_lane(std::string_view lane, double seconds) {
  if (!(seconds >= 0.0)) throw Error(ErrorCode::InvalidArgument, "clock cannot move backwards");
  {
    std::lock_guard lock(mu_);
    if (depth_ > 0) {
      auto it = lanes_.find(lane);
      if (it == lanes_.end()) it = lanes_.emplace(std::string(lane), region_start_).first;
      it->second += seconds;
      return;
    }
    now_ += seconds;
  }
  pace(seconds);
}

void VirtualClock::advance_lanes(std::string_view a, std::string_view b, double seconds) {
  if (!(seconds >= 0.0)) throw Error(ErrorCode::InvalidArgument, "clock cannot move backwards");
  {
    std::lock_guard lock(mu_);
    if (depth_ > 0) {
      auto cursor = [&](std::string_view lane) -> double& {
        auto it = lanes_.find(lane);
        if (it == lanes_.end()) it = lanes_.emplace(std::string(lane), region_start_).first;
        return it->second;
      };
      const double end = std::max(cursor(a), cursor(b)) + seconds;
      cursor(a) = end;
      cursor(b) = end;
      return;
    }
    now_ += seconds;
  }
  pace(seconds);
}

void VirtualClock::begin_parallel() {
  std::lock_guard lock(mu_);
  if (depth_++ == 0) {
    region_start_ = now_;
    lanes_.clear();
  }
}

void VirtualClock::end_parallel() {
  double elapsed = 0.0;
  {
    std::lock_guard lock(mu_);
    if (depth_ == 0) return;
    if (--depth_ > 0) return;
    double end = region_start_;
    for (const auto& [name, t] : lanes_) end = std::max(end, t);
    elapsed = end - now_;
    now_ = end;
    lanes_.clear();
  }
  pace(elapsed);
}

bool VirtualClock::in_parallel() const {
  std::lock_guard lock(mu_);
  return depth_ > 0;
}

void VirtualClock::pace(double seconds) const {
  if (mode_ != ClockMode::Realtime || seconds <= 0.0 || time_scale_ == 0.0) return;
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds * time_scale_));
}

}  // namespace fastwdm

#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace fastwdm {

enum class ClockMode { Virtual, Realtime };

/// Simulated timeline in seconds since scenario start.
///
/// Outside a parallel region every advance() is sequential. Inside a region
/// each lane (one per transceiver endpoint) keeps its own cursor starting at
/// the region start; closing the region moves the clock to the latest lane.
/// In Realtime mode the clock additionally paces wall time (scaled by
/// time_scale) so that operators see real delays.
class VirtualClock {
 public:
  explicit VirtualClock(ClockMode mode = ClockMode::Virtual, double time_scale = 1.0);

  ClockMode mode() const noexcept { return mode_; }
  double now() const;
  /// Start time for work on a lane (the shared now() outside regions).
  double lane_now(std::string_view lane) const;
  /// Start time for work needing several lanes at once.
  double lanes_now(std::string_view a, std::string_view b) const;

  void advance(double seconds);
  void advance_lane(std::string_view lane, double seconds);
  /// Advances both lanes to max(start) + seconds.
  void advance_lanes(std::string_view a, std::string_view b, double seconds);

  void begin_parallel();
  void end_parallel();
  bool in_parallel() const;

 private:
  void pace(double seconds) const;

  mutable std::mutex mu_;
  ClockMode mode_;
  double time_scale_;
  double now_ = 0.0;
  int depth_ = 0;
  double region_start_ = 0.0;
  std::map<std::string, double, std::less<>> lanes_;
};

/// RAII parallel region.
class ParallelRegion {
 public:
  explicit ParallelRegion(VirtualClock& clock) : clock_(clock) { clock_.begin_parallel(); }
  ~ParallelRegion() { clock_.end_parallel(); }
  ParallelRegion(const ParallelRegion&) = delete;
  ParallelRegion& operator=(const ParallelRegion&) = delete;

 private:
  VirtualClock& clock_;
};

}  // namespace fastwdm

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fastwdm/linesim.hpp"
#include "fastwdm/world.hpp"

namespace fastwdm {

struct GsnrSample {
  double t = 0.0;
  double gsnr_db = 0.0;
};

struct Series {
  std::string id;
  std::vector<GsnrSample> samples;

  std::vector<double> times() const;
  std::vector<double> values() const;
  /// Throws InvalidArgument unless timestamps strictly increase.
  void validate() const;
};

struct FluctuationStats {
  double window_s = 300.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double fluctuation = 0.0;
  double duration_s = 0.0;
  std::size_t points = 0;
};

inline constexpr std::size_t kMinFluctuationPoints = 20;

/// Trailing mean over (t - window, t]; output timestamps start at the first
/// sample at least one window after the series start. Throws EmptySeries.
Series moving_average(const Series& series, double window_s = 300.0);

/// Nearest-rank percentile, p in (0, 100]. Throws EmptySeries.
double percentile(std::vector<double> values, double p);

/// p95 - p5 of the moving average. Throws InsufficientData below 20
/// moving-average points.
FluctuationStats fluctuation(const Series& series, double window_s = 300.0);
/// Same statistic on the raw samples (no smoothing).
FluctuationStats raw_fluctuation(const Series& series);

double standard_deviation(const std::vector<double>& values);

/// `series_id,t_seconds,gsnr_db` with header. Throws ParseError naming the
/// line.
std::vector<Series> read_csv(std::istream& in);
void write_csv(std::ostream& out, const std::vector<Series>& series);

/// Link truth sampled on the cadence grid over [t0, t0 + duration).
Series sample_link(LineSystem& line, const std::string& link_id, double thz, double t0, double duration_s,
                   double cadence_s = kDefaultCadenceS);
/// GSNR seen by a lit receiver, sampled the same way. Does not move the clock.
Series sample_connection(World& world, const TrxEndpoint& rx, double t0, double duration_s,
                         double cadence_s = kDefaultCadenceS);

}  // namespace fastwdm

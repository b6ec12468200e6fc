#include "fastwdm/kernels.hpp"

#include <algorithm>
#include <omp.h>

#include "fastwdm/error.hpp"

namespace fastwdm::kernels {

namespace {

void check(const std::vector<double>& t, const std::vector<double>& v, double window_s) {
  if (t.empty()) throw Error(ErrorCode::EmptySeries, "moving average of an empty series");
  if (t.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "time and value lengths differ");
  if (!(window_s > 0.0)) throw Error(ErrorCode::InvalidArgument, "window must be > 0");
}

std::vector<long double> prefix_sums(const std::vector<double>& v) {
  std::vector<long double> p(v.size() + 1, 0.0L);
  for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
  return p;
}

std::size_t first_output(const std::vector<double>& t, double window_s) {
  const double start = t.front() + window_s;
  return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), start) - t.begin());
}

double mean(const std::vector<long double>& p, std::size_t lo, std::size_t hi) {
  return static_cast<double>((p[hi + 1] - p[lo]) / static_cast<long double>(hi + 1 - lo));
}

}  // namespace

MovingAverage moving_average_serial(const std::vector<double>& t, const std::vector<double>& v, double window_s) {
  check(t, v, window_s);
  const auto p = prefix_sums(v);
  MovingAverage out;
  std::size_t lo = 0;
  for (std::size_t i = first_output(t, window_s); i < t.size(); ++i) {
    while (t[lo] <= t[i] - window_s) ++lo;
    out.t.push_back(t[i]);
    out.value.push_back(mean(p, lo, i));
  }
  return out;
}

MovingAverage moving_average_parallel(const std::vector<double>& t, const std::vector<double>& v, double window_s) {
  check(t, v, window_s);
  const auto p = prefix_sums(v);
  const std::size_t first = first_output(t, window_s);
  const std::size_t n = t.size() - first;
  MovingAverage out;
  out.t.assign(t.begin() + static_cast<long>(first), t.end());
  out.value.resize(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const std::size_t i = first + static_cast<std::size_t>(k);
    const auto lo = static_cast<std::size_t>(
        std::upper_bound(t.begin(), t.begin() + static_cast<long>(i) + 1, t[i] - window_s) - t.begin());
    out.value[static_cast<std::size_t>(k)] = mean(p, lo, i);
  }
  return out;
}

void extend_paths_serial(std::vector<OuPath>& paths, double t) {
  for (auto& p : paths) p.extend_to(t);
}

void extend_paths_parallel(std::vector<OuPath>& paths, double t) {
  const auto n = static_cast<long>(paths.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) paths[static_cast<std::size_t>(i)].extend_to(t);
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace fastwdm::kernels

#pragma once

// Data-parallel kernels. Each OpenMP version has a serial reference with
// the same arithmetic so results are bit-identical; tests compare the two.

#include <cstddef>
#include <exception>
#include <vector>

#include "fastwdm/linesim.hpp"

namespace fastwdm::kernels {

struct MovingAverage {
  std::vector<double> t;
  std::vector<double> value;
};

/// Trailing mean over (t_i - window, t_i], reported for t_i - t_0 >= window.
/// Means are formed from long-double prefix sums.
MovingAverage moving_average_serial(const std::vector<double>& t, const std::vector<double>& v, double window_s);
MovingAverage moving_average_parallel(const std::vector<double>& t, const std::vector<double>& v, double window_s);

/// Extends every fluctuation path up to time t.
void extend_paths_serial(std::vector<OuPath>& paths, double t);
void extend_paths_parallel(std::vector<OuPath>& paths, double t);

/// Runs f(i) for i in [0, n) and returns results in index order. The first
/// exception (lowest index) is rethrown after all iterations finish.
template <class R, class F>
std::vector<R> sweep_serial(std::size_t n, F&& f) {
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

template <class R, class F>
std::vector<R> sweep_parallel(std::size_t n, F&& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = f(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

int max_threads() noexcept;

}  // namespace fastwdm::kernels

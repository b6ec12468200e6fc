#include <random>
#include <stdexcept>

#include "fastwdm/kernels.hpp"
#include "support.hpp"

using namespace fastwdm;

TEST_CASE("moving average: parallel equals serial bit for bit") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 0.05);
  std::uniform_real_distribution<double> gap(1.0, 9.0);
  for (std::size_t n : {1u, 60u, 61u, 5000u, 120960u}) {
    std::vector<double> t(n), v(n);
    double now = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = now;
      v[i] = 20.0 + g(rng);
      now += gap(rng);
    }
    const auto a = kernels::moving_average_serial(t, v, 300.0);
    const auto b = kernels::moving_average_parallel(t, v, 300.0);
    CHECK(a.t == b.t);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("moving average input checks") {
  CHECK_CODE(kernels::moving_average_serial({}, {}, 300.0), ErrorCode::EmptySeries);
  CHECK_CODE(kernels::moving_average_parallel({1.0}, {1.0, 2.0}, 300.0), ErrorCode::InvalidArgument);
  CHECK_CODE(kernels::moving_average_serial({1.0}, {1.0}, 0.0), ErrorCode::InvalidArgument);
}

TEST_CASE("extending paths in parallel gives the serial samples") {
  std::vector<OuPath> a, b;
  for (std::uint64_t s = 0; s < 16; ++s) {
    a.emplace_back(FluctuationParams{0.05, 600.0, s});
    b.emplace_back(FluctuationParams{0.05, 600.0, s});
  }
  kernels::extend_paths_serial(a, 86400.0);
  kernels::extend_paths_parallel(b, 86400.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].samples() == b[i].samples());
}

TEST_CASE("sweep keeps index order") {
  const auto f = [](std::size_t i) { return static_cast<double>(i * i) / 3.0; };
  CHECK(kernels::sweep_serial<double>(257, f) == kernels::sweep_parallel<double>(257, f));
  CHECK(kernels::sweep_parallel<double>(0, f).empty());
  CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("sweep rethrows the lowest failing index") {
  const auto f = [](std::size_t i) -> int {
    if (i == 40 || i == 90) throw std::runtime_error("at " + std::to_string(i));
    return static_cast<int>(i);
  };
  try {
    kernels::sweep_parallel<int>(100, f);
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "at 40");
  }
  CHECK_THROWS_AS(kernels::sweep_serial<int>(100, f), std::runtime_error);
}

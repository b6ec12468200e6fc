#include <benchmark/benchmark.h>

#include <random>

#include "fastwdm/kernels.hpp"
#include "fastwdm/telemetry.hpp"

using namespace fastwdm;

namespace {

struct Week {
  std::vector<double> t, v;
  explicit Week(std::size_t n) : t(n), v(n) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.05);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = 5.0 * static_cast<double>(i);
      v[i] = 20.0 + g(rng);
    }
  }
};

void BM_MovingAverageSerial(benchmark::State& state) {
  Week w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::moving_average_serial(w.t, w.v, 300.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MovingAverageParallel(benchmark::State& state) {
  Week w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::moving_average_parallel(w.t, w.v, 300.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ExtendPaths(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<OuPath> paths;
    for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(state.range(0)); ++s)
      paths.emplace_back(FluctuationParams{0.05, 600.0, s});
    state.ResumeTiming();
    if constexpr (Parallel) kernels::extend_paths_parallel(paths, 7 * 86400.0);
    else kernels::extend_paths_serial(paths, 7 * 86400.0);
    benchmark::DoNotOptimize(paths.data());
  }
}

template <bool Parallel>
void BM_Sweep(benchmark::State& state) {
  const auto f = [](std::size_t i) {
    OuPath p({0.05, 600.0, i});
    p.extend_to(86400.0);
    return p.at(86400.0);
  };
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) benchmark::DoNotOptimize(kernels::sweep_parallel<double>(n, f));
    else benchmark::DoNotOptimize(kernels::sweep_serial<double>(n, f));
  }
}

}  // namespace

BENCHMARK(BM_MovingAverageSerial)->Arg(8640)->Arg(120960);
BENCHMARK(BM_MovingAverageParallel)->Arg(8640)->Arg(120960);
BENCHMARK(BM_ExtendPaths<false>)->Arg(16);
BENCHMARK(BM_ExtendPaths<true>)->Arg(16);
BENCHMARK(BM_Sweep<false>)->Arg(64);
BENCHMARK(BM_Sweep<true>)->Arg(64);

BENCHMARK_MAIN();

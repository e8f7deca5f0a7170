#include <benchmark/benchmark.h>

#include <vector>

#include "loclim/limit_process.hpp"
#include "loclim/rng.hpp"

namespace {

void BM_GridSampler(benchmark::State& state) {
  const auto cells = static_cast<std::size_t>(state.range(0));
  std::vector<double> grid(cells);
  for (std::size_t i = 0; i < cells; ++i)
    grid[i] = static_cast<double>(i + 1) / static_cast<double>(cells);
  loclim::RngStream stream(3);
  for (auto _ : state) {
    auto s = loclim::sample_grid(grid, stream);
    benchmark::DoNotOptimize(s.values.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(cells));
}
BENCHMARK(BM_GridSampler)->Arg(10)->Arg(100)->Arg(1000);

void BM_JumpTimes(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  loclim::RngStream stream(4);
  for (auto _ : state) {
    auto t = loclim::sample_jump_times(eps, stream);
    benchmark::DoNotOptimize(t.times.data());
  }
}
BENCHMARK(BM_JumpTimes)->Arg(100)->Arg(10000);

}  // namespace

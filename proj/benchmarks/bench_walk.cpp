#include <benchmark/benchmark.h>

#include "loclim/rng.hpp"
#include "loclim/walk.hpp"

namespace {

void BM_WalkReturns(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto rec = loclim::simulate_walk_returns(n, loclim::RngStream(seed++));
    benchmark::DoNotOptimize(rec.returns.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WalkReturns)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 24);

void BM_HittingWalk(benchmark::State& state) {
  const auto cap = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 1;
  std::uint64_t steps = 0;
  for (auto _ : state) {
    auto out = loclim::simulate_hitting_time({100, 0}, cap, loclim::RngStream(seed++));
    steps += out.hit() ? *out.hit_time : cap;
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_HittingWalk)->Arg(1 << 16)->Arg(1 << 20);

void BM_Enumerate(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto pmf = loclim::enumerate_local_time_distribution(n);
    benchmark::DoNotOptimize(pmf.counts.data());
  }
}
BENCHMARK(BM_Enumerate)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "loclim/skorokhod.hpp"

namespace {

void BM_FrechetStairs(benchmark::State& state) {
  const double res = 1.0 / static_cast<double>(state.range(0));
  const loclim::MonotonePath stair = loclim::StepFunction::staircase(0.5, 0.01, 100);
  const loclim::MonotonePath step = loclim::StepFunction::unit_step(0.5);
  for (auto _ : state) {
    auto d = loclim::m1_distance(stair, step, res);
    benchmark::DoNotOptimize(d.value);
  }
}
BENCHMARK(BM_FrechetStairs)->Arg(100)->Arg(500)->Arg(1000);

void BM_MaxRise(benchmark::State& state) {
  const auto stair =
      loclim::MonotonePath(loclim::StepFunction::staircase(0.1, 0.8, 5000));
  for (auto _ : state) {
    double r = loclim::max_rise(stair, 1e-4);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MaxRise)->Iterations(2000);

}  // namespace

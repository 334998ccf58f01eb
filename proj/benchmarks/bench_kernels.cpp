#include <benchmark/benchmark.h>

#include "lorenzlab/builtin_maps.hpp"
#include "lorenzlab/orbits.hpp"
#include "lorenzlab/periodic.hpp"
#include "lorenzlab/return_maps.hpp"
#include "lorenzlab/spectral.hpp"

using namespace lorenzlab;

namespace {

LorenzMap ex(const char* name) { return LorenzMap(*builtin_map(name)); }

void BM_Iterate(benchmark::State& state) {
  const LorenzMap m = ex("logistic4-embed");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate_orbit(m, 0.123, Side::none, n).log_derivative_sum);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Iterate)->Arg(1'000)->Arg(100'000);

void BM_Lyapunov(benchmark::State& state) {
  const LorenzMap m = ex("logistic4-embed");
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov(m, 0.123, 1'000'000).value);
}
BENCHMARK(BM_Lyapunov)->Unit(benchmark::kMillisecond);

void BM_PeriodicSearch(benchmark::State& state) {
  const LorenzMap m = ex("logistic4-embed");
  const auto p = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_periodic_points(m, p).orbits.size());
}
BENCHMARK(BM_PeriodicSearch)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_FirstReturnMap(benchmark::State& state) {
  const LorenzMap m = ex("logistic3.4-embed");
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_return_map(m, {5.0 / 17.0, 12.0 / 17.0}, 10'000, res).branches.size());
  }
}
BENCHMARK(BM_FirstReturnMap)->Arg(1 << 10)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const LorenzMap m = ex("paper-example");
  for (auto _ : state) benchmark::DoNotOptimize(decompose(m).strata.size());
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "permstat/permstat.hpp"

namespace {

using namespace permstat;

void BM_DistanceMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const DataMatrix x = sample_gaussian(n, p, std::nullopt, 1);
  const DataMatrix y = sample_gaussian(n, p, std::nullopt, 2);
  for (auto _ : state) benchmark::DoNotOptimize(euclidean_distance_matrix(x, y));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n * n * p));
}
BENCHMARK(BM_DistanceMatrix)
    ->ArgsProduct({{100, 200, 400}, {10, 100, 500}})
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

void BM_KernelMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DataMatrix x = sample_gaussian(n, 50, std::nullopt, 1);
  const DataMatrix y = sample_gaussian(n, 50, std::nullopt, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_kernel_matrix(x, y, 5.0));
}
BENCHMARK(BM_KernelMatrix)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

template <PermBackend Backend>
void BM_PermTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = static_cast<std::size_t>(state.range(1));
  const DataMatrix x = sample_gaussian(n, p, std::nullopt, 3);
  const DataMatrix y = sample_gaussian(n, p, MeanShiftSpec{p, 1, 0.5}, 4);
  const PermutationStream stream(5);
  for (auto _ : state) benchmark::DoNotOptimize(run_perm_test(Backend, x, y, 200, stream).p_value);
}
BENCHMARK(BM_PermTest<PermBackend::Standard>)
    ->Name("BM_PermTest/standard")
    ->Args({50, 100})
    ->Args({100, 100})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermTest<PermBackend::Precomputed>)
    ->Name("BM_PermTest/precomputed")
    ->ArgsProduct({{50, 100, 200}, {100, 500}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermTest<PermBackend::Efficient>)
    ->Name("BM_PermTest/efficient")
    ->ArgsProduct({{50, 100, 200}, {100, 500}})
    ->Unit(benchmark::kMillisecond);

void BM_CrossED(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DataMatrix x = sample_gaussian(n, 100, std::nullopt, 3);
  const DataMatrix y = sample_gaussian(n, 100, std::nullopt, 4);
  for (auto _ : state) benchmark::DoNotOptimize(cross_ed_test(x, y).p_value);
}
BENCHMARK(BM_CrossED)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Serial reference vs OpenMP for the two parallel kernels.

#include "hazardgrid/bench.hpp"
#include "hazardgrid/flood.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace hazardgrid;

namespace {

void stamp(benchmark::State& state, bool parallel)
{
    const int n = static_cast<int>(state.range(0));
    std::vector<int> arrival(static_cast<std::size_t>(n * n));
    const Ping ping{{n / 3, n / 2}, 4};
    for (auto _ : state) {
        std::fill(arrival.begin(), arrival.end(), FloodModel::never);
        if (parallel)
            stamp_ping_arrivals(arrival, n, n, ping, 0.0, 0.02);
        else
            stamp_ping_arrivals_serial(arrival, n, n, ping, 0.0, 0.02);
        benchmark::DoNotOptimize(arrival.data());
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_StampSerial(benchmark::State& state) { stamp(state, false); }
void BM_StampParallel(benchmark::State& state) { stamp(state, true); }
BENCHMARK(BM_StampSerial)->Arg(128)->Arg(256);
BENCHMARK(BM_StampParallel)->Arg(128)->Arg(256);

ExperimentConfig small_suite()
{
    ExperimentConfig cfg;
    cfg.map_sizes = {16};
    cfg.maps_per_density = 2;
    cfg.repetitions = 2;
    cfg.total_episodes = 100;
    return cfg;
}

void BM_BenchmarkSerial(benchmark::State& state)
{
    const auto cfg = small_suite();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_benchmark_serial(cfg));
}

void BM_BenchmarkParallel(benchmark::State& state)
{
    const auto cfg = small_suite();
    for (auto _ : state)
        benchmark::DoNotOptimize(run_benchmark(cfg, 0));
}

BENCHMARK(BM_BenchmarkSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BenchmarkParallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

// Serial reference vs OpenMP for the grid sweep and the multi-start fit.

#include "petdse/calibration.hpp"
#include "petdse/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace petdse;

namespace {

void run_sweeps(benchmark::State& state, bool parallel)
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto coeffs = default_coefficients();
    const double step = 1.0 / static_cast<double>(state.range(0));
    const auto grid = make_grid(1.0, 7.0, step);
    for (auto _ : state) {
        for (auto k : {TopologyKind::HybridTraditional, TopologyKind::HybridSbb, TopologyKind::FullBridge}) {
            auto r = evaluate_grid(spec, catalog.topology(k), catalog, coeffs, grid, parallel);
            benchmark::DoNotOptimize(r);
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()) * 3);
}

void BM_SweepSerial(benchmark::State& state) { run_sweeps(state, false); }
void BM_SweepParallel(benchmark::State& state) { run_sweeps(state, true); }

void run_calibration(benchmark::State& state, bool parallel)
{
    const SystemSpec spec;
    const auto catalog = default_catalog();
    const auto targets = reference_targets();
    CalibrationOptions opts;
    opts.parallel = parallel;
    for (auto _ : state) {
        auto r = calibrate(spec, catalog, targets, default_coefficients(), opts);
        benchmark::DoNotOptimize(r);
    }
}

void BM_CalibrateSerial(benchmark::State& state) { run_calibration(state, false); }
void BM_CalibrateParallel(benchmark::State& state) { run_calibration(state, true); }

}  // namespace

// Points per unit of m: 20 is the default 0.05 step.
BENCHMARK(BM_SweepSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CalibrateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CalibrateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

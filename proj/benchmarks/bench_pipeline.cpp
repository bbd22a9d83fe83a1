#include <benchmark/benchmark.h>

#include "driftcal/simulate.hpp"

namespace {

void BM_GenerateFleet(benchmark::State& state) {
    auto scn = driftcal::default_scenario();
    scn.horizon_hours = double(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::generate(scn));
    }
}
BENCHMARK(BM_GenerateFleet)->Arg(100)->Arg(406);

void BM_OfflineCorrection(benchmark::State& state) {
    auto scn = driftcal::default_scenario();
    const auto fleet = driftcal::generate(scn);
    driftcal::CycleSelection counts;
    const auto cals = driftcal::schedule_calibrations(
        fleet.sensors[0], scn.cycle, scn.horizon_hours, 5.0,
        double(state.range(0)), counts);
    driftcal::KernelSpec kernel;
    kernel.length_hours = 200.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            driftcal::correct_offline(cals, kernel, fleet.sensors[0]));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(fleet.sensors[0].size()));
}
BENCHMARK(BM_OfflineCorrection)->Arg(20)->Arg(50)->Arg(100);

void BM_ScheduleRun(benchmark::State& state) {
    auto scn = driftcal::default_scenario();
    driftcal::ScheduleSimOptions opts;
    opts.schedule.alpha = 0.1;
    opts.schedule.initial_interval_hours = double(state.range(0));
    opts.schedule.max_interval_hours = 100.0;
    opts.kernel.length_hours = 200.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::run_one_schedule(scn, opts, 0));
    }
}
BENCHMARK(BM_ScheduleRun)->Arg(40);

}  // namespace

BENCHMARK_MAIN();

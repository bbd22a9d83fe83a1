#include <benchmark/benchmark.h>

#include <random>

#include "driftcal/gpr.hpp"

namespace {

driftcal::GpTrainingSet random_training(std::size_t n) {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> u(0.0, 406.0);
    std::normal_distribution<double> z(0.0, 1.0);
    driftcal::GpTrainingSet train;
    for (std::size_t i = 0; i < n; ++i) {
        train.times.push_back(u(g));
        train.targets.push_back(z(g));
        train.noise_vars.push_back(0.01);
    }
    return train;
}

void BM_FitGp(benchmark::State& state) {
    const auto train = random_training(static_cast<std::size_t>(state.range(0)));
    driftcal::KernelSpec kernel;
    kernel.length_hours = 200.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::fit_gp(train, kernel));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitGp)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void BM_Predict(benchmark::State& state) {
    const auto train = random_training(40);
    driftcal::KernelSpec kernel;
    kernel.length_hours = 200.0;
    const auto model = driftcal::fit_gp(train, kernel);
    std::vector<double> grid(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = double(i) * 0.4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::predict(model, grid));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Predict)->RangeMultiplier(4)->Range(64, 16384);

void BM_FitVariance(benchmark::State& state) {
    const auto train = random_training(static_cast<std::size_t>(state.range(0)));
    driftcal::KernelSpec kernel;
    kernel.length_hours = 200.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::fit_variance(train, kernel));
    }
}
BENCHMARK(BM_FitVariance)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "driftcal/kernels.hpp"

namespace {

std::vector<double> random_times(std::size_t n) {
    std::mt19937_64 g(1234);
    std::uniform_real_distribution<double> u(0.0, 406.0);
    std::vector<double> ts(n);
    for (auto& t : ts) t = u(g);
    return ts;
}

void BM_KernelEval(benchmark::State& state) {
    driftcal::KernelSpec spec;
    spec.family = static_cast<driftcal::KernelFamily>(state.range(0));
    spec.length_hours = 200.0;
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::kernel_eval(spec, t, t + 37.5));
        t += 0.1;
    }
}
BENCHMARK(BM_KernelEval)->DenseRange(0, 2);

void BM_Gram(benchmark::State& state) {
    driftcal::KernelSpec spec;
    spec.length_hours = 200.0;
    const auto ts = random_times(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(driftcal::gram(spec, ts, ts));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(8, 128)->Complexity();

}  // namespace

#include <benchmark/benchmark.h>

#include <cmath>

#include "fsb/model.hpp"
#include "fsb/sampling.hpp"

namespace {

void BM_InverseCdfTableBuild(benchmark::State& state) {
    for (auto _ : state) {
        fsb::ScalarInverseCdfSampler sampler(
            [](double x) { return std::exp(-x); }, 0.0,
            std::numeric_limits<double>::infinity());
        benchmark::DoNotOptimize(sampler.total_mass());
    }
    state.SetLabel("build exponential table");
}
BENCHMARK(BM_InverseCdfTableBuild)->Unit(benchmark::kMillisecond);

void BM_IsModelDraws(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const fsb::ISModel model(fsb::GeneratorFunction::exponential(1.0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.sample(1.0, n, fsb::RngSeed{seed++}));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_IsModelDraws)->Arg(10000)->Arg(100000);

void BM_SphereDraws(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::sample_unit_sphere(d, 10000,
                                                         fsb::RngSeed{seed++}));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            10000);
}
BENCHMARK(BM_SphereDraws)->Arg(2)->Arg(8);

}  // namespace

#include <benchmark/benchmark.h>

#include <cmath>

#include "fsb/analysis.hpp"
#include "fsb/asymptotics.hpp"
#include "fsb/quadrature.hpp"

namespace {

void BM_SemiInfiniteExponential(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fsb::integrate_semi_infinite([](double t) { return std::exp(-t); }));
    }
}
BENCHMARK(BM_SemiInfiniteExponential);

void BM_SemiInfiniteSingular(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::integrate_semi_infinite(
            [](double t) { return std::exp(-t) / std::sqrt(t); }));
    }
}
BENCHMARK(BM_SemiInfiniteSingular);

void BM_Theorem2Check(benchmark::State& state) {
    const auto g = fsb::GeneratorFunction::exponential(1.0);
    const auto w = fsb::WeightFunction::log_sum_exp(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::check_theorem2(g, w));
    }
}
BENCHMARK(BM_Theorem2Check);

void BM_SandwichVariance(benchmark::State& state) {
    const fsb::ISModel gamma(fsb::GeneratorFunction::exponential(1.0));
    const auto view = gamma.scalar_view();
    const auto is = fsb::BregmanDivergence::itakura_saito();
    const auto lse = fsb::WeightFunction::log_sum_exp(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::sandwich_variance(view, lse, is, 1.0));
    }
    state.SetLabel("I, J, and Sigma by quadrature");
}
BENCHMARK(BM_SandwichVariance)->Unit(benchmark::kMillisecond);

void BM_BaselineVariance(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fsb::baseline_variance(fsb::BaselineKind::GammaDiv, 1.0, 1.0));
    }
}
BENCHMARK(BM_BaselineVariance)->Unit(benchmark::kMillisecond);

}  // namespace

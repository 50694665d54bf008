#include <benchmark/benchmark.h>

#include "fsb/estimator.hpp"
#include "fsb/model.hpp"

namespace {

void BM_EstimateIsLse(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const double alpha = static_cast<double>(state.range(1)) / 100.0;
    const fsb::ISModel model(fsb::GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, n, fsb::RngSeed{17});
    const auto is = fsb::BregmanDivergence::itakura_saito();
    const auto lse = fsb::WeightFunction::log_sum_exp(alpha);
    fsb::EstimatorConfig cfg;
    cfg.n_starts = 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::estimate(data, is, lse, cfg));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EstimateIsLse)
    ->Args({1000, 50})
    ->Args({1000, 100})
    ->Args({10000, 100})
    ->Unit(benchmark::kMillisecond);

void BM_ObjectiveEval(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const fsb::ISModel model(fsb::GeneratorFunction::exponential(1.0));
    const auto data = model.sample(1.0, n, fsb::RngSeed{17});
    const auto is = fsb::BregmanDivergence::itakura_saito();
    const auto lse = fsb::WeightFunction::log_sum_exp(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fsb::objective_eval(data, is, lse, 1.1));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ObjectiveEval)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();

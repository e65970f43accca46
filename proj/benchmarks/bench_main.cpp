#include <benchmark/benchmark.h>

#include "estq/engine.hpp"
#include "estq/gittins.hpp"
#include "estq/policies.hpp"

namespace {

void BM_ScoreSeh(benchmark::State& state) {
    double a = 0.0;
    for (auto _ : state) {
        a += 0.001;
        if (a > 30.0) a = 0.0;
        benchmark::DoNotOptimize(estq::score_seh(a, 20.0));
    }
}
BENCHMARK(BM_ScoreSeh);

void BM_TruncatedMean(benchmark::State& state) {
    const auto model = estq::ErrorModel::log_normal(0.5);
    double t = 0.1;
    for (auto _ : state) {
        t *= 1.001;
        if (t > 100.0) t = 0.1;
        benchmark::DoNotOptimize(estq::truncated_mean(model, t));
    }
}
BENCHMARK(BM_TruncatedMean);

void BM_GittinsScoreMemoized(benchmark::State& state) {
    estq::GittinsScorer scorer(estq::ErrorModel::log_normal(0.5));
    // the engine re-scores the same (attained, est) pairs at most epochs
    for (auto _ : state) {
        for (int i = 0; i < 32; ++i) {
            benchmark::DoNotOptimize(scorer.score(0.5 * i, 10.0 + i));
        }
    }
    state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_GittinsScoreMemoized);

void BM_RunSimulation(benchmark::State& state) {
    const double k = state.range(0) / 100.0;
    auto spec = estq::WorkloadSpec::synthetic(estq::SizeDistribution::weibull_unit_mean(k),
                                              estq::ErrorModel::log_normal(0.5), 0.9);
    estq::PolicyParams params;
    params.error = estq::ErrorModel::log_normal(0.5);
    const auto policy =
        estq::Policy::make(state.range(1) == 0 ? estq::PolicyId::Srpt
                                               : estq::PolicyId::Gittins,
                           params);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        const auto r = estq::run_simulation(spec, policy, 2000, seed++);
        benchmark::DoNotOptimize(r.agg.mst);
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_RunSimulation)->Args({25, 0})->Args({25, 1})->Args({200, 0})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

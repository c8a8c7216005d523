#include <benchmark/benchmark.h>

#include "bandit_elim/arm_model.hpp"
#include "bandit_elim/schedule.hpp"

// Throughput of the sampling hot path and latency of the planners. The
// planners run once per algorithm invocation, so microseconds there are
// irrelevant next to the 1e8+ draws a large run consumes; these numbers are
// mostly useful for sizing trial batches.

namespace {

using namespace bandit_elim;

Instance two_group_instance(ArmKind kind) {
    ArmSpec good{kind, 0.7, kind == ArmKind::gaussian ? 0.25 : 0.0};
    ArmSpec rest{kind, 0.5, kind == ArmKind::gaussian ? 0.25 : 0.0};
    return make_instance({{good, 1}, {rest, 999}});
}

void BM_BernoulliDraws(benchmark::State& state) {
    Instance instance = two_group_instance(ArmKind::bernoulli);
    SamplingOracle oracle(instance, 1, 0);
    const std::int64_t chunk = state.range(0);
    for (auto _ : state) {
        PullResult result = oracle.pull(0, chunk);
        benchmark::DoNotOptimize(result.sum);
    }
    state.SetItemsProcessed(state.iterations() * chunk);
}
BENCHMARK(BM_BernoulliDraws)->Arg(1024)->Arg(65536);

void BM_GaussianDraws(benchmark::State& state) {
    Instance instance = two_group_instance(ArmKind::gaussian);
    SamplingOracle oracle(instance, 1, 0);
    const std::int64_t chunk = state.range(0);
    for (auto _ : state) {
        PullResult result = oracle.pull(0, chunk);
        benchmark::DoNotOptimize(result.sum);
    }
    state.SetItemsProcessed(state.iterations() * chunk);
}
BENCHMARK(BM_GaussianDraws)->Arg(1024)->Arg(65536);

void BM_PredictSamples(benchmark::State& state) {
    const Algorithm algo = static_cast<Algorithm>(state.range(0));
    for (auto _ : state) {
        SchedulePrediction plan = predict_samples(algo, 300000, 0.2, 0.05);
        benchmark::DoNotOptimize(plan.total_samples);
    }
}
BENCHMARK(BM_PredictSamples)
    ->Arg(static_cast<int>(Algorithm::naive))
    ->Arg(static_cast<int>(Algorithm::aggressive))
    ->Arg(static_cast<int>(Algorithm::saba))
    ->Arg(static_cast<int>(Algorithm::aba))
    ->Arg(static_cast<int>(Algorithm::abaleh))
    ->Arg(static_cast<int>(Algorithm::median));

}  // namespace

BENCHMARK_MAIN();

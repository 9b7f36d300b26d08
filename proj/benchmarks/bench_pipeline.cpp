#include <benchmark/benchmark.h>

#include "poplab/analysis.hpp"
#include "poplab/dataset.hpp"
#include "poplab/learners.hpp"

using namespace poplab;

namespace {

const DistributionSpec kSpec = Gaussian1d{0.0, 1.0, ThresholdLabeler{0, 0.0}};

void BM_StrategicErmThreshold(benchmark::State& state) {
    const Dataset train = synth_dataset(kSpec, static_cast<std::size_t>(state.range(0)), SeedSpec{1, 0});
    const CostSpec c = CostSpec::scalar(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(strategic_erm_threshold(train, c));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StrategicErmThreshold)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_PopReport(benchmark::State& state) {
    const Dataset test = synth_dataset(kSpec, static_cast<std::size_t>(state.range(0)), SeedSpec{2, 0});
    const Classifier f = Classifier::threshold(0, 1.8);
    const auto believed = ContestantModel::informed(Classifier::threshold(0, 2.5));
    const ModelProvider provider = [&](std::size_t, const Example&) { return believed; };
    const CostSpec c = CostSpec::scalar(1.0);
    PopOptions opts;
    opts.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(pop_report(f, provider, c, test, opts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PopReport)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_ContestantFit(benchmark::State& state) {
    const Dataset samples = synth_dataset(kSpec, static_cast<std::size_t>(state.range(0)), SeedSpec{3, 0});
    const TrainConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(contestant_fit(samples, Family::threshold, cfg));
}
BENCHMARK(BM_ContestantFit)->Arg(4)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();

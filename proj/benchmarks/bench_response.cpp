#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "poplab/classifier.hpp"
#include "poplab/cost.hpp"
#include "poplab/response.hpp"

using namespace poplab;

namespace {

std::vector<FeatureVector> points(std::size_t dim, std::size_t count) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<FeatureVector> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> x(dim);
        for (auto& v : x) v = z(rng);
        out.emplace_back(std::move(x));
    }
    return out;
}

void BM_ThresholdResponse(benchmark::State& state) {
    const Classifier g = Classifier::threshold(0, 1.0);
    const CostSpec c = CostSpec::scalar(1.0);
    const auto xs = points(1, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(best_response(g, c, xs[i++ & 4095]));
    }
}
BENCHMARK(BM_ThresholdResponse);

void BM_LinearResponse(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    std::vector<double> w(d, 1.0);
    const Classifier g = Classifier::linear(w, -1.0);
    const CostSpec c = CostSpec::linear_separable(std::vector<double>(d, 1.0));
    const auto xs = points(d, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(best_response(g, c, xs[i++ & 4095]));
    }
}
BENCHMARK(BM_LinearResponse)->Arg(2)->Arg(16)->Arg(200);

void BM_SafeResponse(benchmark::State& state) {
    const Classifier g = Classifier::threshold(0, 1.0);
    const CostSpec c = CostSpec::scalar(1.0);
    const auto xs = points(1, 4096);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(safe_response(g, c, xs[i++ & 4095], 0.2));
    }
}
BENCHMARK(BM_SafeResponse);

}  // namespace

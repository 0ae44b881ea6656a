#include <benchmark/benchmark.h>

#include "filtercast/metrics.hpp"
#include "filtercast/synthgen.hpp"

namespace {

std::vector<double> series_of(int days) {
    return filtercast::gen_inar(filtercast::InarSpec{0.7, 30.0, days, 5}).as_doubles();
}

void BM_AcfBestLag(benchmark::State& state) {
    const std::vector<double> s = series_of(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::best_lag(s, 7));
    }
}
BENCHMARK(BM_AcfBestLag)->Arg(365)->Arg(5000);

void BM_PermutationEntropy(benchmark::State& state) {
    const std::vector<double> s = series_of(365);
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::permutation_entropy(s, order));
    }
}
BENCHMARK(BM_PermutationEntropy)->Arg(3)->Arg(5);

}  // namespace

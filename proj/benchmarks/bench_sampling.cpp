#include <benchmark/benchmark.h>

#include "filtercast/sampling.hpp"
#include "filtercast/synthgen.hpp"

namespace {

const filtercast::CountSeries& year_series() {
    static const filtercast::CountSeries series =
        filtercast::gen_inar(filtercast::InarSpec{0.7, 30.0, 365, 7});
    return series;
}

void BM_BinomialThin(benchmark::State& state) {
    const auto& x = year_series();
    const int trials = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::binomial_thin(x, 0.5, trials, 11));
    }
}
BENCHMARK(BM_BinomialThin)->Arg(1)->Arg(10)->Arg(50);

void BM_GenInar(benchmark::State& state) {
    const filtercast::InarSpec spec{0.7, 30.0, static_cast<int>(state.range(0)), 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::gen_inar(spec));
    }
}
BENCHMARK(BM_GenInar)->Arg(365)->Arg(5000);

}  // namespace

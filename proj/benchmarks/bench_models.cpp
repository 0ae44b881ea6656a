#include <benchmark/benchmark.h>

#include "filtercast/arima.hpp"
#include "filtercast/lstm.hpp"
#include "filtercast/series.hpp"
#include "filtercast/synthgen.hpp"

namespace {

std::vector<double> normalized_year() {
    return filtercast::znormalize(filtercast::gen_inar(filtercast::InarSpec{0.7, 30.0, 365, 9}))
        .values;
}

void BM_ArimaFitCell(benchmark::State& state) {
    const std::vector<double> z = normalized_year();
    const filtercast::arima::ArimaOrder order{static_cast<int>(state.range(0)), 1,
                                              static_cast<int>(state.range(1))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::arima::fit_css(z, order));
    }
}
BENCHMARK(BM_ArimaFitCell)->Args({1, 0})->Args({1, 1})->Args({5, 5});

void BM_ArimaGridSearch(benchmark::State& state) {
    const std::vector<double> z = normalized_year();
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::arima::grid_search(z));
    }
}
BENCHMARK(BM_ArimaGridSearch)->Unit(benchmark::kMillisecond);

void BM_LstmEpoch(benchmark::State& state) {
    const std::vector<double> z = normalized_year();
    filtercast::rnn::RnnSpec spec;
    spec.hidden = static_cast<int>(state.range(0));
    const filtercast::rnn::WindowDataset data = filtercast::rnn::make_windows(z, {}, 7);
    const filtercast::rnn::RnnModel model = filtercast::rnn::init_model(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(filtercast::rnn::loss_and_gradient(model, data));
    }
}
BENCHMARK(BM_LstmEpoch)->Arg(16)->Arg(32);

}  // namespace

#include "filtercast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "filtercast/errors.hpp"
#include "filtercast/stats.hpp"

namespace filtercast {

double acf_at_lag(std::span<const double> series, int lag) {
    if (lag < 1) throw ParameterError("acf_at_lag: lag must be >= 1");
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(lag) + 2) {
        throw LengthError("acf_at_lag: series shorter than lag + 2");
    }
    const std::size_t m = n - static_cast<std::size_t>(lag);
    return pearson(series.first(m), series.subspan(static_cast<std::size_t>(lag), m));
}

AcfResult best_lag(std::span<const double> series, int max_lag) {
    if (max_lag < 1) throw ParameterError("best_lag: max_lag must be >= 1");
    AcfResult best{0, 0.0};
    for (int lag = 1; lag <= max_lag; ++lag) {
        const double value = acf_at_lag(series, lag);
        if (best.lag == 0 || value > best.value) best = AcfResult{lag, value};
    }
    return best;
}

std::vector<int> ordinal_pattern(std::span<const double> window) {
    std::vector<int> idx(window.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return window[static_cast<std::size_t>(a)] <
                                                window[static_cast<std::size_t>(b)]; });
    return idx;
}

PermutationEntropyResult permutation_entropy(std::span<const double> series, int order,
                                             std::vector<std::string>* warnings) {
    if (order < 2 || order > 7) {
        throw ParameterError("permutation_entropy: order must lie in [2, 7]");
    }
    const std::size_t d = static_cast<std::size_t>(order);
    if (series.size() < d + 1) {
        throw LengthError("permutation_entropy: series shorter than order + 1");
    }

    double motif_count = 1.0;
    for (int i = 2; i <= order; ++i) motif_count *= i;
    if (warnings != nullptr &&
        static_cast<double>(series.size()) < 5.0 * motif_count) {
        warnings->push_back("series length " + std::to_string(series.size()) +
                            " below recommended 5 * " + std::to_string(order) +
                            "! windows for permutation entropy");
    }

    PermutationEntropyResult result;
    result.order = order;
    const std::size_t n_windows = series.size() - d + 1;
    for (std::size_t t = 0; t < n_windows; ++t) {
        ++result.motif_histogram[ordinal_pattern(series.subspan(t, d))];
    }

    double entropy = 0.0;
    for (const auto& [pattern, count] : result.motif_histogram) {
        const double q = static_cast<double>(count) / static_cast<double>(n_windows);
        entropy -= q * std::log(q);
    }
    // A single observed motif yields exactly 0 (q = 1), not -0.
    result.entropy_nats = entropy <= 0.0 ? 0.0 : entropy;
    result.normalized = result.entropy_nats / std::log(motif_count);
    return result;
}

}  // namespace filtercast

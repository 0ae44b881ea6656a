#pragma once

// Shared helpers for the test suites: independent reference statistics and
// small data generators. Everything here is deliberately written the naive
// way so it can serve as an oracle for the library implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "filtercast/rng.hpp"

namespace testutil {

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double population_variance(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size());
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x);
    const std::vector<double> ry = ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Gaussian AR(1): y_t = phi * y_{t-1} + N(0, sigma^2), y_0 from the
/// stationary distribution.
inline std::vector<double> gaussian_ar1(double phi, double sigma, std::size_t n,
                                        std::uint64_t seed) {
    filtercast::Rng rng(filtercast::derive_stream(seed, 0xa41));
    std::vector<double> y(n);
    y[0] = rng.normal(0.0, sigma / std::sqrt(1.0 - phi * phi));
    for (std::size_t t = 1; t < n; ++t) y[t] = phi * y[t - 1] + rng.normal(0.0, sigma);
    return y;
}

inline std::vector<double> iid_normal(std::size_t n, std::uint64_t seed) {
    filtercast::Rng rng(filtercast::derive_stream(seed, 0x11d));
    std::vector<double> y(n);
    for (double& v : y) v = rng.normal();
    return y;
}

}  // namespace testutil

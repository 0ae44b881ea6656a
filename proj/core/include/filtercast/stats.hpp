#pragma once

#include <cmath>
#include <span>

#include "filtercast/errors.hpp"

namespace filtercast {

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Variance with denominator N (population) or N-1 (sample).
inline double variance_of(std::span<const double> v, bool sample = false) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(sample ? n - 1 : n);
}

inline double stddev_of(std::span<const double> v, bool sample = false) {
    return std::sqrt(variance_of(v, sample));
}

/// Pearson correlation of two equal-length slices.
/// Throws DegenerateSeriesError when either slice has zero variance.
inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw AlignmentError("pearson: slices differ in length");
    if (a.size() < 2) throw LengthError("pearson: need at least 2 points");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) {
        throw DegenerateSeriesError("pearson: zero-variance slice");
    }
    return sab / std::sqrt(saa * sbb);
}

inline double rmse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) {
        throw AlignmentError("rmse: prediction/actual length mismatch");
    }
    if (predicted.empty()) throw LengthError("rmse: empty input");
    double ss = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double e = predicted[i] - actual[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(predicted.size()));
}

}  // namespace filtercast

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace filtercast {

struct AcfResult {
    int lag = 1;
    double value = 0.0;
};

/// Bandt-Pompe permutation entropy of one series.
struct PermutationEntropyResult {
    int order = 3;                 // embedding dimension d
    double entropy_nats = 0.0;     // Shannon entropy over observed motifs
    double normalized = 0.0;       // entropy_nats / ln(d!)
    std::map<std::vector<int>, std::size_t> motif_histogram;
};

/// Pearson correlation of the series with its lag-shifted copy:
/// corr(s[0..T-lag), s[lag..T)). Throws LengthError when the series is
/// shorter than lag + 2 and DegenerateSeriesError when either slice is
/// constant.
double acf_at_lag(std::span<const double> series, int lag);

/// Scans lags 1..max_lag and returns the one with the highest
/// autocorrelation (smallest lag wins ties). The protocol computes this once
/// on the ground truth and reuses the lag for every sampled version.
AcfResult best_lag(std::span<const double> series, int max_lag = 7);

/// The permutation listing element indices in ascending value order.
/// Ties are broken by ascending index, so the result is deterministic on
/// count data.
std::vector<int> ordinal_pattern(std::span<const double> window);

/// Slides a length-d window with step 1, histograms the ordinal patterns and
/// returns their Shannon entropy. A warning is appended to `warnings` (when
/// provided) if the series is shorter than the 5 * d! rule of thumb.
PermutationEntropyResult permutation_entropy(std::span<const double> series, int order,
                                             std::vector<std::string>* warnings = nullptr);

}  // namespace filtercast

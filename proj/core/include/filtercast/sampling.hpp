#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "filtercast/series.hpp"

namespace filtercast {

/// Random filter: every event survives independently with probability p.
/// Stochastic, so it is repeated `trials` times from a seeded stream.
struct BinomialThinning {
    double p = 1.0;
    int trials = 50;
    std::uint64_t seed = 0;
};

/// Real-world filter: keep events whose aggregate risk score is <= threshold.
struct RiskThreshold {
    int threshold = kMaxRiskScore;
};

/// Real-world filter: keep events belonging to the k rarest categories.
struct CategoryStack {
    int k = 1;
};

using SamplingScheme = std::variant<BinomialThinning, RiskThreshold, CategoryStack>;

/// Human-readable form, e.g. "binomial(p=0.4, trials=50)".
std::string describe(const SamplingScheme& scheme);

/// The scalar that places a scheme on a sweep axis: p, threshold or k.
double scheme_parameter(const SamplingScheme& scheme);

/// Filtered views of one source series, one per trial. Deterministic
/// real-world schemes always produce exactly one member.
struct TrialSet {
    std::vector<CountSeries> series;
    SamplingScheme scheme;
};

/// Draws Y_t ~ Binomial(X_t, p) for every day and trial. Streams are derived
/// from (seed, trial, day), so identical inputs reproduce identical output
/// bit-for-bit regardless of evaluation order.
TrialSet binomial_thin(const CountSeries& x, double p, int trials, std::uint64_t seed);

/// Counts events with risk score <= threshold per day.
CountSeries risk_threshold_filter(const EventLog& log, int threshold, DayRange range,
                                  bool allow_clip = false);

/// Category labels ordered rarest first (ascending total count, ties broken
/// lexicographically by label).
std::vector<std::string> categories_by_rarity(const EventLog& log);

/// Counts events belonging to the k rarest categories per day. k equal to
/// the number of distinct categories reproduces the full aggregate.
CountSeries category_stack_series(const EventLog& log, int k, DayRange range,
                                  bool allow_clip = false);

/// sum(y)/sum(x): the fraction of source events surviving a filter.
double effective_rate(const CountSeries& y, const CountSeries& x);

}  // namespace filtercast

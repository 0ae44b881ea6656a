#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace filtercast {

inline constexpr int kNumScoreComponents = 4;

/// Component order matches the event-log CSV columns.
inline constexpr std::array<const char*, kNumScoreComponents> kScoreComponentNames = {
    "impostor", "malware", "spam", "phish"};

inline constexpr int kMaxComponentScore = 100;
inline constexpr int kMaxRiskScore = kNumScoreComponents * kMaxComponentScore;

/// One gateway event: the day it arrived, its category label and the four
/// appliance scores (each 0..100).
struct EventRecord {
    int day = 0;
    std::string category;
    std::array<int, kNumScoreComponents> scores{};

    /// Aggregate risk score, in [0, 400].
    int risk_score() const { return scores[0] + scores[1] + scores[2] + scores[3]; }
};

struct EventLog {
    std::vector<EventRecord> records;
};

/// Throws ValidationError if any record has a negative day or an
/// out-of-range score component.
void validate(const EventLog& log);

/// Inclusive day range [first, last].
struct DayRange {
    int first = 0;
    int last = 0;

    int length() const { return last - first + 1; }
    bool contains(int day) const { return day >= first && day <= last; }
};

/// Infers the smallest range covering all records. Throws LengthError on an
/// empty log.
DayRange covering_range(const EventLog& log);

/// Daily event counts at fixed unit spacing: values[i] is the count on day
/// start_day + i. Days without events hold explicit zeros.
struct CountSeries {
    std::vector<std::int64_t> values;
    int start_day = 0;
    std::string label;
    std::string provenance;

    std::size_t size() const { return values.size(); }
    std::vector<double> as_doubles() const {
        return std::vector<double>(values.begin(), values.end());
    }
};

/// Throws ValidationError on negative counts.
void validate(const CountSeries& series);

/// z-scored series together with the mean/std needed to invert it.
struct NormalizedSeries {
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 1.0;
};

/// Counts records per day over the given range. Records outside the range
/// throw RangeError unless allow_clip is set, in which case they are dropped.
CountSeries aggregate_daily(const EventLog& log, DayRange range, bool allow_clip = false);

/// z-score normalization. The default uses the population std (denominator
/// N); pass sample_std for N-1. Throws LengthError for fewer than 2 points
/// and DegenerateSeriesError for a constant series.
NormalizedSeries znormalize(std::span<const double> values, bool sample_std = false);
NormalizedSeries znormalize(const CountSeries& series, bool sample_std = false);

/// Normalize with externally supplied statistics (train-only protocols).
NormalizedSeries znormalize_with(std::span<const double> values, double mean, double stddev);

std::vector<double> denormalize(const NormalizedSeries& series);
inline double denormalize_value(const NormalizedSeries& series, double v) {
    return v * series.stddev + series.mean;
}

}  // namespace filtercast

#include "filtercast/series.hpp"

#include <cmath>

#include "filtercast/errors.hpp"
#include "filtercast/stats.hpp"

namespace filtercast {

void validate(const EventLog& log) {
    for (const EventRecord& r : log.records) {
        if (r.day < 0) {
            throw ValidationError("event record has negative day index " +
                                  std::to_string(r.day));
        }
        for (int i = 0; i < kNumScoreComponents; ++i) {
            if (r.scores[i] < 0 || r.scores[i] > kMaxComponentScore) {
                throw ValidationError(std::string(kScoreComponentNames[i]) + " score " +
                                      std::to_string(r.scores[i]) + " outside [0, 100]");
            }
        }
    }
}

DayRange covering_range(const EventLog& log) {
    if (log.records.empty()) throw LengthError("covering_range: empty event log");
    int lo = log.records.front().day;
    int hi = lo;
    for (const EventRecord& r : log.records) {
        lo = std::min(lo, r.day);
        hi = std::max(hi, r.day);
    }
    return DayRange{lo, hi};
}

void validate(const CountSeries& series) {
    for (std::int64_t v : series.values) {
        if (v < 0) throw ValidationError("count series has negative value");
    }
}

CountSeries aggregate_daily(const EventLog& log, DayRange range, bool allow_clip) {
    if (range.length() <= 0) throw ParameterError("aggregate_daily: empty day range");
    validate(log);
    CountSeries out;
    out.start_day = range.first;
    out.values.assign(static_cast<std::size_t>(range.length()), 0);
    for (const EventRecord& r : log.records) {
        if (!range.contains(r.day)) {
            if (allow_clip) continue;
            throw RangeError("record on day " + std::to_string(r.day) +
                             " outside range [" + std::to_string(range.first) + ", " +
                             std::to_string(range.last) + "]");
        }
        ++out.values[static_cast<std::size_t>(r.day - range.first)];
    }
    return out;
}

NormalizedSeries znormalize(std::span<const double> values, bool sample_std) {
    if (values.size() < 2) throw LengthError("znormalize: need at least 2 points");
    const double m = mean_of(values);
    const double s = stddev_of(values, sample_std);
    if (s <= 0.0) throw DegenerateSeriesError("znormalize: constant series (std = 0)");
    return znormalize_with(values, m, s);
}

NormalizedSeries znormalize(const CountSeries& series, bool sample_std) {
    return znormalize(std::span<const double>(series.as_doubles()), sample_std);
}

NormalizedSeries znormalize_with(std::span<const double> values, double mean, double stddev) {
    if (!(stddev > 0.0) || !std::isfinite(stddev) || !std::isfinite(mean)) {
        throw DegenerateSeriesError("znormalize: invalid normalization statistics");
    }
    NormalizedSeries out;
    out.mean = mean;
    out.stddev = stddev;
    out.values.reserve(values.size());
    for (double v : values) out.values.push_back((v - mean) / stddev);
    return out;
}

std::vector<double> denormalize(const NormalizedSeries& series) {
    std::vector<double> out;
    out.reserve(series.values.size());
    for (double v : series.values) out.push_back(denormalize_value(series, v));
    return out;
}

}  // namespace filtercast

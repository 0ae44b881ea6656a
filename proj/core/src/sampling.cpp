#include "filtercast/sampling.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "filtercast/errors.hpp"
#include "filtercast/rng.hpp"

namespace filtercast {

namespace {

// Stream purpose tag separating thinning draws from any other use of the
// same master seed.
constexpr std::uint64_t kThinningTag = 0x7468696eull;  // "thin"

}  // namespace

std::string describe(const SamplingScheme& scheme) {
    std::ostringstream out;
    if (const auto* b = std::get_if<BinomialThinning>(&scheme)) {
        out << "binomial(p=" << b->p << ", trials=" << b->trials << ")";
    } else if (const auto* t = std::get_if<RiskThreshold>(&scheme)) {
        out << "risk_threshold(t=" << t->threshold << ")";
    } else {
        out << "category_stack(k=" << std::get<CategoryStack>(scheme).k << ")";
    }
    return out.str();
}

double scheme_parameter(const SamplingScheme& scheme) {
    if (const auto* b = std::get_if<BinomialThinning>(&scheme)) return b->p;
    if (const auto* t = std::get_if<RiskThreshold>(&scheme)) return t->threshold;
    return std::get<CategoryStack>(scheme).k;
}

TrialSet binomial_thin(const CountSeries& x, double p, int trials, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("binomial_thin: p must lie in [0, 1]");
    }
    if (trials < 1) throw ParameterError("binomial_thin: trials must be >= 1");
    validate(x);

    TrialSet out;
    out.scheme = BinomialThinning{p, trials, seed};
    out.series.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        CountSeries y;
        y.start_day = x.start_day;
        y.label = x.label;
        std::ostringstream prov;
        prov << "thinned(p=" << p << ", trial=" << trial << ", seed=" << seed << ")";
        y.provenance = prov.str();
        y.values.reserve(x.values.size());
        for (std::size_t day = 0; day < x.values.size(); ++day) {
            Rng rng(derive_stream(seed, static_cast<std::uint64_t>(trial), day, kThinningTag));
            y.values.push_back(rng.binomial(x.values[day], p));
        }
        out.series.push_back(std::move(y));
    }
    return out;
}

CountSeries risk_threshold_filter(const EventLog& log, int threshold, DayRange range,
                                  bool allow_clip) {
    if (threshold < 0 || threshold > kMaxRiskScore) {
        throw ParameterError("risk_threshold_filter: threshold must lie in [0, 400]");
    }
    validate(log);
    EventLog kept;
    for (const EventRecord& r : log.records) {
        if (r.risk_score() <= threshold) kept.records.push_back(r);
    }
    // Out-of-range events must still be reported even if they were filtered,
    // so the range check runs against the full log first.
    if (!allow_clip) {
        for (const EventRecord& r : log.records) {
            if (!range.contains(r.day)) {
                throw RangeError("record on day " + std::to_string(r.day) +
                                 " outside aggregation range");
            }
        }
    }
    CountSeries out = aggregate_daily(kept, range, allow_clip);
    out.provenance = "risk_threshold(t=" + std::to_string(threshold) + ")";
    return out;
}

std::vector<std::string> categories_by_rarity(const EventLog& log) {
    std::map<std::string, std::int64_t> totals;
    for (const EventRecord& r : log.records) ++totals[r.category];
    std::vector<std::string> order;
    order.reserve(totals.size());
    for (const auto& [label, count] : totals) order.push_back(label);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        if (totals[a] != totals[b]) return totals[a] < totals[b];
        return a < b;
    });
    return order;
}

CountSeries category_stack_series(const EventLog& log, int k, DayRange range,
                                  bool allow_clip) {
    validate(log);
    const std::vector<std::string> order = categories_by_rarity(log);
    if (k < 1 || static_cast<std::size_t>(k) > order.size()) {
        throw ParameterError("category_stack_series: k must lie in [1, " +
                             std::to_string(order.size()) + "]");
    }
    const std::set<std::string> included(order.begin(), order.begin() + k);
    EventLog kept;
    for (const EventRecord& r : log.records) {
        if (included.contains(r.category)) kept.records.push_back(r);
    }
    if (!allow_clip) {
        for (const EventRecord& r : log.records) {
            if (!range.contains(r.day)) {
                throw RangeError("record on day " + std::to_string(r.day) +
                                 " outside aggregation range");
            }
        }
    }
    CountSeries out = aggregate_daily(kept, range, allow_clip);
    out.provenance = "category_stack(k=" + std::to_string(k) + ")";
    return out;
}

double effective_rate(const CountSeries& y, const CountSeries& x) {
    if (y.values.size() != x.values.size() || y.start_day != x.start_day) {
        throw AlignmentError("effective_rate: series are not aligned");
    }
    long double sum_y = 0.0L, sum_x = 0.0L;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        sum_y += static_cast<long double>(y.values[i]);
        sum_x += static_cast<long double>(x.values[i]);
    }
    if (sum_x <= 0.0L) throw DegenerateSeriesError("effective_rate: source sums to zero");
    return static_cast<double>(sum_y / sum_x);
}

}  // namespace filtercast

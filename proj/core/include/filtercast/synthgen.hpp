#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "filtercast/series.hpp"

namespace filtercast {

/// Poisson INAR(1) specification: X_t = alpha o X_{t-1} + Poisson(lambda),
/// where `o` is binomial thinning. The stationary mean is
/// lambda / (1 - alpha) and the lag-tau autocorrelation is alpha^tau, which
/// makes the family an analytic oracle for the sampling experiments.
struct InarSpec {
    double alpha = 0.7;
    double lambda = 30.0;
    int days = 365;
    std::uint64_t seed = 0;
};

CountSeries gen_inar(const InarSpec& spec);

/// Same recursion with the innovation rate modulated by a 7-day profile
/// (multiplicative), so lag-7 structure is available for best-lag tests.
CountSeries gen_seasonal_inar(const InarSpec& spec, const std::array<double, 7>& weekly_profile);

/// Calibration presets for two enterprise scales: a high-volume gateway
/// (about 2233 events/day) and a low-volume one (about 184 events/day).
InarSpec inar_high_volume_preset(std::uint64_t seed);
InarSpec inar_low_volume_preset(std::uint64_t seed);

/// Integer score distribution for one component: triangular on [min, max]
/// peaking at mode.
struct ScoreProfile {
    int min = 0;
    int max = 0;
    int mode = 0;
};

struct CategoryProfile {
    std::string label;
    double weight = 1.0;
    std::array<ScoreProfile, kNumScoreComponents> scores{};
};

struct LabelSpec {
    std::vector<CategoryProfile> categories;
};

void validate(const LabelSpec& spec);

/// Skewed six-category preset: rare categories carry high risk scores, so
/// threshold and category-stack filters thin the series progressively.
/// Total risk scores stay within [0, 300].
LabelSpec default_label_spec();

LabelSpec label_spec_from_json(const std::string& json_text);
std::string to_json(const LabelSpec& spec);

/// Expands every counted unit into one labeled event: category drawn from
/// the weight distribution, scores from that category's profiles.
/// aggregate_daily over the full range reproduces `series` exactly.
EventLog gen_labeled_log(const CountSeries& series, const LabelSpec& labels,
                         std::uint64_t seed);

}  // namespace filtercast

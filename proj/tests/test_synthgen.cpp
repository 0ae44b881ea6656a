#include <doctest.h>

#include <cmath>
#include <map>

#include "filtercast/errors.hpp"
#include "filtercast/metrics.hpp"
#include "filtercast/series.hpp"
#include "filtercast/synthgen.hpp"
#include "test_util.hpp"

using namespace filtercast;

TEST_CASE("alpha = 0 reduces to iid Poisson") {
    const CountSeries s = gen_inar(InarSpec{0.0, 30.0, 5000, 3});
    const std::vector<double> v = s.as_doubles();
    CHECK(testutil::mean(v) == doctest::Approx(30.0).epsilon(0.05));
    CHECK(testutil::population_variance(v) == doctest::Approx(30.0).epsilon(0.10));
    CHECK(std::abs(acf_at_lag(v, 1)) < 0.05);
}

TEST_CASE("INAR stationary moments and autocorrelation") {
    const CountSeries s = gen_inar(InarSpec{0.7, 30.0, 5000, 7});
    const std::vector<double> v = s.as_doubles();
    CHECK(testutil::mean(v) == doctest::Approx(100.0).epsilon(0.05));
    const double bound = 3.0 / std::sqrt(5000.0);
    for (int tau : {1, 2, 3}) {
        CHECK(std::abs(acf_at_lag(v, tau) - std::pow(0.7, tau)) <= bound + 0.02);
    }
}

TEST_CASE("calibration presets hit their target daily means") {
    const CountSeries high = gen_inar(inar_high_volume_preset(11));
    CHECK(testutil::mean(high.as_doubles()) == doctest::Approx(2233.0).epsilon(0.10));
    const CountSeries low = gen_inar(inar_low_volume_preset(13));
    CHECK(testutil::mean(low.as_doubles()) == doctest::Approx(184.0).epsilon(0.10));
}

TEST_CASE("generation is deterministic under the seed") {
    const InarSpec spec{0.7, 30.0, 200, 5};
    CHECK(gen_inar(spec).values == gen_inar(spec).values);
    InarSpec other = spec;
    other.seed = 6;
    CHECK(gen_inar(spec).values != gen_inar(other).values);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(gen_inar(InarSpec{1.0, 30.0, 100, 1}), ParameterError);
    CHECK_THROWS_AS(gen_inar(InarSpec{-0.1, 30.0, 100, 1}), ParameterError);
    CHECK_THROWS_AS(gen_inar(InarSpec{0.5, 0.0, 100, 1}), ParameterError);
    CHECK_THROWS_AS(gen_inar(InarSpec{0.5, 30.0, 29, 1}), ParameterError);
}

TEST_CASE("weekly seasonal preset produces a lag-7 best lag") {
    const CountSeries s =
        gen_seasonal_inar(InarSpec{0.2, 40.0, 700, 19}, {2.0, 1.4, 1.0, 0.8, 1.0, 0.4, 0.3});
    CHECK(best_lag(s.as_doubles(), 7).lag == 7);
}

TEST_CASE("labeled log conserves daily counts exactly") {
    const CountSeries s = gen_inar(InarSpec{0.6, 25.0, 120, 23});
    const EventLog log = gen_labeled_log(s, default_label_spec(), 31);
    const CountSeries back = aggregate_daily(log, {0, 119});
    CHECK(back.values == s.values);
    validate(log);  // all scores within bounds
}

TEST_CASE("labeled log categories follow the weight distribution") {
    CountSeries s;
    s.values.assign(100, 1000);  // 1e5 events
    const LabelSpec labels = default_label_spec();
    const EventLog log = gen_labeled_log(s, labels, 37);
    std::map<std::string, double> freq;
    for (const EventRecord& r : log.records) freq[r.category] += 1.0;
    const double n = static_cast<double>(log.records.size());
    for (const CategoryProfile& c : labels.categories) {
        const double observed = freq[c.label] / n;
        const double sigma = std::sqrt(c.weight * (1.0 - c.weight) / n);
        CHECK(std::abs(observed - c.weight) <= 4.0 * sigma);
    }
}

TEST_CASE("default label spec is frequency-skewed with rare high-risk categories") {
    const LabelSpec labels = default_label_spec();
    // rarest category carries the highest typical risk
    const CategoryProfile& rarest = labels.categories.back();
    const CategoryProfile& commonest = labels.categories.front();
    CHECK(rarest.weight < commonest.weight);
    int rare_mode_sum = 0, common_mode_sum = 0;
    for (int i = 0; i < kNumScoreComponents; ++i) {
        rare_mode_sum += rarest.scores[static_cast<std::size_t>(i)].mode;
        common_mode_sum += commonest.scores[static_cast<std::size_t>(i)].mode;
        // totals stay within the observed 0..300 band
    }
    CHECK(rare_mode_sum > common_mode_sum);
    for (const CategoryProfile& c : labels.categories) {
        int max_sum = 0;
        for (int i = 0; i < kNumScoreComponents; ++i) {
            max_sum += c.scores[static_cast<std::size_t>(i)].max;
        }
        CHECK(max_sum <= 300);
    }
}

TEST_CASE("label spec JSON round trip") {
    const LabelSpec labels = default_label_spec();
    const LabelSpec back = label_spec_from_json(to_json(labels));
    REQUIRE(back.categories.size() == labels.categories.size());
    for (std::size_t i = 0; i < labels.categories.size(); ++i) {
        CHECK(back.categories[i].label == labels.categories[i].label);
        CHECK(back.categories[i].weight == doctest::Approx(labels.categories[i].weight));
    }
    CHECK_THROWS_AS(label_spec_from_json("{"), ParseError);
    CHECK_THROWS_AS(label_spec_from_json("{\"categories\":[]}"), ValidationError);
}

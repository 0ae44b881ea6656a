#include <doctest.h>

#include <algorithm>
#include <random>

#include "filtercast/errors.hpp"
#include "filtercast/rng.hpp"
#include "filtercast/series.hpp"
#include "test_util.hpp"

using namespace filtercast;

namespace {

EventLog log_on_days(const std::vector<int>& days) {
    EventLog log;
    for (int d : days) log.records.push_back(EventRecord{d, "generic", {0, 0, 0, 0}});
    return log;
}

}  // namespace

TEST_CASE("aggregate_daily counts records per day") {
    const CountSeries s = aggregate_daily(log_on_days({0, 0, 2}), {0, 2});
    CHECK(s.values == std::vector<std::int64_t>{2, 0, 1});
    CHECK(s.start_day == 0);
}

TEST_CASE("aggregate_daily of an empty log is all zeros") {
    const CountSeries s = aggregate_daily(EventLog{}, {0, 4});
    CHECK(s.values == std::vector<std::int64_t>{0, 0, 0, 0, 0});
}

TEST_CASE("aggregate_daily conserves the record count") {
    // counting oracle: tally days independently while generating
    Rng rng(42);
    EventLog log;
    std::vector<std::int64_t> expected(10, 0);
    for (int i = 0; i < 1000; ++i) {
        const int day = static_cast<int>(rng.next_u64() % 10);
        ++expected[static_cast<std::size_t>(day)];
        log.records.push_back(EventRecord{day, "x", {1, 2, 3, 4}});
    }
    const CountSeries s = aggregate_daily(log, {0, 9});
    CHECK(s.values == expected);
    std::int64_t total = 0;
    for (auto v : s.values) total += v;
    CHECK(total == 1000);
}

TEST_CASE("aggregate_daily is permutation invariant") {
    Rng rng(7);
    EventLog log;
    for (int i = 0; i < 200; ++i) {
        log.records.push_back(
            EventRecord{static_cast<int>(rng.next_u64() % 30), "c", {0, 0, 0, 0}});
    }
    const CountSeries base = aggregate_daily(log, {0, 29});
    for (int round = 0; round < 5; ++round) {
        std::shuffle(log.records.begin(), log.records.end(),
                     std::mt19937_64(static_cast<std::uint64_t>(round)));
        CHECK(aggregate_daily(log, {0, 29}).values == base.values);
    }
}

TEST_CASE("aggregate_daily range handling") {
    const EventLog log = log_on_days({1, 5});
    CHECK_THROWS_AS(aggregate_daily(log, {0, 3}), RangeError);
    const CountSeries clipped = aggregate_daily(log, {0, 3}, true);
    CHECK(clipped.values == std::vector<std::int64_t>{0, 1, 0, 0});
}

TEST_CASE("validation rejects out-of-range scores and days") {
    EventLog bad;
    bad.records.push_back(EventRecord{0, "c", {0, 101, 0, 0}});
    CHECK_THROWS_AS(validate(bad), ValidationError);
    bad.records[0] = EventRecord{-1, "c", {0, 0, 0, 0}};
    CHECK_THROWS_AS(validate(bad), ValidationError);
    CHECK(EventRecord{0, "c", {100, 100, 100, 100}}.risk_score() == 400);
}

TEST_CASE("znormalize matches the hand-computed example") {
    CountSeries s;
    s.values = {1, 2, 3};
    const NormalizedSeries z = znormalize(s);
    CHECK(z.mean == doctest::Approx(2.0));
    CHECK(z.stddev == doctest::Approx(0.816496580927726));
    CHECK(z.values[0] == doctest::Approx(-1.224744871391589));
    CHECK(z.values[1] == doctest::Approx(0.0));
    CHECK(z.values[2] == doctest::Approx(1.224744871391589));

    // sample (N-1) variant
    const NormalizedSeries zs = znormalize(s, true);
    CHECK(zs.stddev == doctest::Approx(1.0));
    CHECK(zs.values[2] == doctest::Approx(1.0));
}

TEST_CASE("znormalize output is exactly standardized") {
    const std::vector<double> data = testutil::iid_normal(500, 3);
    const NormalizedSeries z = znormalize(data);
    CHECK(testutil::mean(z.values) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::sqrt(testutil::population_variance(z.values)) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("znormalize rejects degenerate input") {
    CountSeries constant;
    constant.values = {5, 5, 5};
    CHECK_THROWS_AS(znormalize(constant), DegenerateSeriesError);
    CountSeries single;
    single.values = {5};
    CHECK_THROWS_AS(znormalize(single), LengthError);
}

TEST_CASE("denormalize inverts znormalize") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Rng rng(seed);
        std::vector<double> data(100);
        for (double& v : data) v = std::floor(rng.uniform(0.0, 500.0));
        const NormalizedSeries z = znormalize(data);
        const std::vector<double> back = denormalize(z);
        for (std::size_t i = 0; i < data.size(); ++i) {
            CHECK(back[i] == doctest::Approx(data[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("count series validation rejects negative values") {
    CountSeries s;
    s.values = {1, -1};
    CHECK_THROWS_AS(validate(s), ValidationError);
}

#include <doctest.h>

#include <cmath>

#include "filtercast/errors.hpp"
#include "filtercast/metrics.hpp"
#include "test_util.hpp"

using namespace filtercast;

TEST_CASE("acf of a periodic series at its period is exactly 1") {
    std::vector<double> s;
    const double profile[7] = {0, 3, 1, 4, 1, 5, 9};
    for (int i = 0; i < 70; ++i) s.push_back(profile[i % 7]);
    CHECK(acf_at_lag(s, 7) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("acf of a linear ramp at lag 1 is 1") {
    CHECK(acf_at_lag(std::vector<double>{1, 2, 3, 4, 5}, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("acf of iid noise is near zero") {
    const std::vector<double> s = testutil::iid_normal(10000, 5);
    CHECK(std::abs(acf_at_lag(s, 1)) <= 0.03);
}

TEST_CASE("acf guards") {
    CHECK_THROWS_AS(acf_at_lag(std::vector<double>{1, 1, 1, 1}, 1), DegenerateSeriesError);
    CHECK_THROWS_AS(acf_at_lag(std::vector<double>{1, 2}, 1), LengthError);
    CHECK_THROWS_AS(acf_at_lag(std::vector<double>{1, 2, 3}, 0), ParameterError);
}

TEST_CASE("acf is invariant under positive affine maps") {
    const std::vector<double> s = testutil::gaussian_ar1(0.6, 1.0, 400, 9);
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) t[i] = 3.5 * s[i] + 11.0;
    for (int lag : {1, 3, 7}) {
        CHECK(acf_at_lag(t, lag) == doctest::Approx(acf_at_lag(s, lag)).epsilon(1e-9));
    }
}

TEST_CASE("best lag finds a weekly period") {
    std::vector<double> s;
    const double profile[7] = {0, 3, 1, 4, 1, 5, 9};
    for (int i = 0; i < 140; ++i) s.push_back(profile[i % 7]);
    CHECK(best_lag(s, 7).lag == 7);
}

TEST_CASE("best lag of a positive AR(1) is 1") {
    const std::vector<double> s = testutil::gaussian_ar1(0.7, 1.0, 3000, 13);
    CHECK(best_lag(s, 7).lag == 1);
}

TEST_CASE("best lag on a constant series propagates the degenerate error") {
    CHECK_THROWS_AS(best_lag(std::vector<double>(50, 2.0), 7), DegenerateSeriesError);
}

TEST_CASE("ordinal patterns") {
    CHECK(ordinal_pattern(std::vector<double>{3, 6, 1}) == std::vector<int>{2, 0, 1});
    CHECK(ordinal_pattern(std::vector<double>{1, 2, 3}) == std::vector<int>{0, 1, 2});
    // stable tie rule: equal values keep index order
    CHECK(ordinal_pattern(std::vector<double>{5, 5, 2}) == std::vector<int>{2, 0, 1});
}

TEST_CASE("permutation entropy of a monotone series is exactly zero") {
    std::vector<double> s;
    for (int i = 0; i < 50; ++i) s.push_back(i * 1.5);
    for (int d : {3, 4, 5}) {
        const PermutationEntropyResult r = permutation_entropy(s, d);
        CHECK(r.entropy_nats == 0.0);
        CHECK(r.normalized == 0.0);
        CHECK(r.motif_histogram.size() == 1);
    }
}

TEST_CASE("permutation entropy matches the hand-enumerated worked series") {
    const std::vector<double> s{4, 7, 9, 10, 6, 11, 3};
    const PermutationEntropyResult r = permutation_entropy(s, 3);
    REQUIRE(r.motif_histogram.size() == 3);
    CHECK(r.motif_histogram.at({0, 1, 2}) == 2);
    CHECK(r.motif_histogram.at({2, 0, 1}) == 2);
    CHECK(r.motif_histogram.at({1, 0, 2}) == 1);
    // oracle: -(0.4 ln 0.4 + 0.4 ln 0.4 + 0.2 ln 0.2)
    const double expected = -(0.4 * std::log(0.4) * 2.0 + 0.2 * std::log(0.2));
    CHECK(r.entropy_nats == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.entropy_nats == doctest::Approx(1.0549).epsilon(1e-3));
    CHECK(r.normalized == doctest::Approx(expected / std::log(6.0)).epsilon(1e-12));
    CHECK(r.normalized == doctest::Approx(0.5888).epsilon(1e-3));
}

TEST_CASE("permutation entropy of iid noise approaches the maximum") {
    const std::vector<double> s = testutil::iid_normal(10000, 21);
    const PermutationEntropyResult r = permutation_entropy(s, 3);
    CHECK(r.normalized >= 0.95);
    CHECK(r.normalized <= 1.0);
}

TEST_CASE("permutation entropy histogram counts sum to the window count") {
    const std::vector<double> s = testutil::iid_normal(500, 33);
    for (int d : {3, 4, 5}) {
        const PermutationEntropyResult r = permutation_entropy(s, d);
        std::size_t total = 0;
        for (const auto& [pattern, count] : r.motif_histogram) total += count;
        CHECK(total == s.size() - static_cast<std::size_t>(d) + 1);
        CHECK(r.normalized >= 0.0);
        CHECK(r.normalized <= 1.0);
    }
}

TEST_CASE("permutation entropy is invariant under monotone transforms") {
    const std::vector<double> s = testutil::iid_normal(800, 44);  // ties have measure zero
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) t[i] = std::exp(s[i]) + 5.0;
    const PermutationEntropyResult rs = permutation_entropy(s, 3);
    const PermutationEntropyResult rt = permutation_entropy(t, 3);
    CHECK(rs.entropy_nats == rt.entropy_nats);
    CHECK(rs.motif_histogram == rt.motif_histogram);
}

TEST_CASE("permutation entropy guards") {
    CHECK_THROWS_AS(permutation_entropy(std::vector<double>{1, 2, 3}, 3), LengthError);
    CHECK_THROWS_AS(permutation_entropy(std::vector<double>(50, 1.0), 8), ParameterError);
    CHECK_THROWS_AS(permutation_entropy(std::vector<double>(50, 1.0), 1), ParameterError);

    std::vector<std::string> warnings;
    permutation_entropy(testutil::iid_normal(20, 1), 4, &warnings);
    CHECK(warnings.size() == 1);  // 20 < 5 * 4!
}

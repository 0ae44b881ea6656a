#include <doctest.h>

#include <sstream>

#include "filtercast/csv_io.hpp"
#include "filtercast/errors.hpp"
#include "filtercast/synthgen.hpp"

using namespace filtercast;

TEST_CASE("event log row parses into a record") {
    std::istringstream in(
        "day,category,impostor,malware,spam,phish\n"
        "3,Marketing,0,0,12,0\n");
    const EventLog log = read_event_log(in);
    REQUIRE(log.records.size() == 1);
    CHECK(log.records[0].day == 3);
    CHECK(log.records[0].category == "Marketing");
    CHECK(log.records[0].scores == std::array<int, 4>{0, 0, 12, 0});
}

TEST_CASE("event log parse errors carry line numbers") {
    std::istringstream bad_fields(
        "day,category,impostor,malware,spam,phish\n"
        "1,x,0,0,0\n");
    try {
        read_event_log(bad_fields);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream bad_header("day,category\n");
    CHECK_THROWS_AS(read_event_log(bad_header), ParseError);

    std::istringstream bad_day(
        "day,category,impostor,malware,spam,phish\n"
        "x,x,0,0,0,0\n");
    CHECK_THROWS_AS(read_event_log(bad_day), ParseError);
}

TEST_CASE("event log score out of range is a validation error") {
    std::istringstream in(
        "day,category,impostor,malware,spam,phish\n"
        "1,x,0,101,0,0\n");
    CHECK_THROWS_AS(read_event_log(in), ValidationError);
}

TEST_CASE("10k synthetic records round-trip byte-identically") {
    InarSpec spec{0.5, 40.0, 250, 99};
    const EventLog log = gen_labeled_log(gen_inar(spec), default_label_spec(), 5);
    REQUIRE(log.records.size() > 10000);

    std::ostringstream first;
    write_event_log(log, first);
    std::istringstream back(first.str());
    const EventLog reread = read_event_log(back);
    std::ostringstream second;
    write_event_log(reread, second);
    CHECK(first.str() == second.str());
    CHECK(reread.records.size() == log.records.size());
}

TEST_CASE("count series CSV round trip") {
    CountSeries s;
    s.start_day = 3;
    s.values = {5, 0, 2, 9};
    std::ostringstream out;
    write_count_series(s, out);
    CHECK(out.str() == "day,count\n3,5\n4,0\n5,2\n6,9\n");
    std::istringstream in(out.str());
    const CountSeries back = read_count_series(in);
    CHECK(back.start_day == s.start_day);
    CHECK(back.values == s.values);
}

TEST_CASE("count series reader sorts rows and fills gaps with zeros") {
    std::istringstream in("day,count\n4,7\n1,2\n3,1\n");
    const CountSeries s = read_count_series(in);
    CHECK(s.start_day == 1);
    CHECK(s.values == std::vector<std::int64_t>{2, 0, 1, 7});
}

TEST_CASE("count series reader rejects duplicates and negatives") {
    std::istringstream dup("day,count\n1,2\n1,3\n");
    CHECK_THROWS_AS(read_count_series(dup), ParseError);
    std::istringstream neg("day,count\n1,-2\n");
    CHECK_THROWS_AS(read_count_series(neg), ValidationError);
    std::istringstream empty("day,count\n");
    CHECK_THROWS_AS(read_count_series(empty), ParseError);
}

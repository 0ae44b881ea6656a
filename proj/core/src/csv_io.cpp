#include "filtercast/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "filtercast/errors.hpp"

namespace filtercast {

namespace {

constexpr const char* kEventHeader = "day,category,impostor,malware,spam,phish";
constexpr const char* kCountHeader = "day,count";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

long parse_int(std::string_view field, std::size_t line_no, const char* what) {
    long value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw ParseError(std::string("invalid ") + what + " '" + std::string(field) + "'",
                         line_no);
    }
    return value;
}

// Strips one trailing '\r' so CRLF input is tolerated on read.
std::string_view chomp(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

EventLog read_event_log(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++line_no;
    if (chomp(line) != kEventHeader) {
        throw ParseError(std::string("expected header '") + kEventHeader + "'", line_no);
    }
    EventLog log;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = chomp(line);
        if (row.empty()) continue;
        const auto fields = split_fields(row);
        if (fields.size() != 6) {
            throw ParseError("expected 6 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        EventRecord rec;
        const long day = parse_int(fields[0], line_no, "day");
        if (day < 0) throw ValidationError("negative day index on line " + std::to_string(line_no));
        rec.day = static_cast<int>(day);
        rec.category = std::string(fields[1]);
        if (rec.category.empty()) throw ParseError("empty category", line_no);
        for (int i = 0; i < kNumScoreComponents; ++i) {
            const long s = parse_int(fields[2 + i], line_no, kScoreComponentNames[i]);
            if (s < 0 || s > kMaxComponentScore) {
                throw ValidationError(std::string(kScoreComponentNames[i]) + " score " +
                                      std::to_string(s) + " outside [0, 100] on line " +
                                      std::to_string(line_no));
            }
            rec.scores[i] = static_cast<int>(s);
        }
        log.records.push_back(std::move(rec));
    }
    return log;
}

EventLog read_event_log(const std::string& path) {
    auto in = open_input(path);
    return read_event_log(in);
}

void write_event_log(const EventLog& log, std::ostream& out) {
    validate(log);
    std::vector<const EventRecord*> order;
    order.reserve(log.records.size());
    for (const EventRecord& r : log.records) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const EventRecord* a, const EventRecord* b) {
        if (a->day != b->day) return a->day < b->day;
        if (a->category != b->category) return a->category < b->category;
        return a->scores < b->scores;
    });
    out << kEventHeader << '\n';
    for (const EventRecord* r : order) {
        out << r->day << ',' << r->category;
        for (int s : r->scores) out << ',' << s;
        out << '\n';
    }
}

void write_event_log(const EventLog& log, const std::string& path) {
    auto out = open_output(path);
    write_event_log(log, out);
}

CountSeries read_count_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ++line_no;
    if (chomp(line) != kCountHeader) {
        throw ParseError(std::string("expected header '") + kCountHeader + "'", line_no);
    }
    std::map<int, std::int64_t> by_day;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = chomp(line);
        if (row.empty()) continue;
        const auto fields = split_fields(row);
        if (fields.size() != 2) {
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        const long day = parse_int(fields[0], line_no, "day");
        const long count = parse_int(fields[1], line_no, "count");
        if (count < 0) {
            throw ValidationError("negative count on line " + std::to_string(line_no));
        }
        if (!by_day.emplace(static_cast<int>(day), count).second) {
            throw ParseError("duplicate day " + std::to_string(day), line_no);
        }
    }
    if (by_day.empty()) throw ParseError("count series has no rows", line_no);
    CountSeries series;
    series.start_day = by_day.begin()->first;
    const int last_day = by_day.rbegin()->first;
    series.values.assign(static_cast<std::size_t>(last_day - series.start_day) + 1, 0);
    for (const auto& [day, count] : by_day) {
        series.values[static_cast<std::size_t>(day - series.start_day)] = count;
    }
    return series;
}

CountSeries read_count_series(const std::string& path) {
    auto in = open_input(path);
    return read_count_series(in);
}

void write_count_series(const CountSeries& series, std::ostream& out) {
    validate(series);
    out << kCountHeader << '\n';
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out << (series.start_day + static_cast<int>(i)) << ',' << series.values[i] << '\n';
    }
}

void write_count_series(const CountSeries& series, const std::string& path) {
    auto out = open_output(path);
    write_count_series(series, out);
}

}  // namespace filtercast

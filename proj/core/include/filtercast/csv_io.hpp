#pragma once

#include <iosfwd>
#include <string>

#include "filtercast/series.hpp"

namespace filtercast {

// Event-log CSV contract: header `day,category,impostor,malware,spam,phish`,
// one record per line, UTF-8, LF line endings. Writing emits the canonical
// form (records sorted by day, then category, then scores), so
// write(read(file)) is byte-identical for canonical input.

EventLog read_event_log(std::istream& in);
EventLog read_event_log(const std::string& path);
void write_event_log(const EventLog& log, std::ostream& out);
void write_event_log(const EventLog& log, const std::string& path);

// Count-series CSV contract: header `day,count`, canonical form sorted by
// day with no duplicates. Reading tolerates unsorted rows and fills interior
// gaps with explicit zero counts; duplicate days are a parse error.

CountSeries read_count_series(std::istream& in);
CountSeries read_count_series(const std::string& path);
void write_count_series(const CountSeries& series, std::ostream& out);
void write_count_series(const CountSeries& series, const std::string& path);

}  // namespace filtercast

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace issuelens {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

// Accepts ISO-8601 date-times with an explicit zone: "Z", "+HH:MM" or "+HHMM"
// (Jira exports use the latter). Fractional seconds are truncated to milliseconds.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Canonical UTC rendering, e.g. "2021-03-04T10:15:30.000Z".
std::string format_timestamp(Timestamp t);

int utc_year(Timestamp t);

Timestamp make_utc(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                   int second = 0);

}  // namespace issuelens

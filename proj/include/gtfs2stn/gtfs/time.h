#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace gtfs2stn {

// Seconds since service-day midnight. GTFS allows values past 24:00:00.
using time_s = std::int32_t;

constexpr time_s kDaySeconds = 86400;
constexpr time_s kMaxServiceTime = 2 * kDaySeconds;

// Accepts "H:MM:SS" and "HH:MM:SS" (hours may be >= 24). Throws BadTime.
time_s parse_time(std::string_view);

// Always "HH:MM:SS" with at least two hour digits.
std::string format_time(time_s);

// "HH:MM" or "HH:MM:SS"; used by the CLI and HTTP surfaces.
time_s parse_clock(std::string_view);

using date = std::chrono::year_month_day;

// "YYYYMMDD". Throws BadDate.
date parse_date(std::string_view);
std::string format_date(date);

// 0 = Monday .. 6 = Sunday
unsigned weekday_index(date);

}  // namespace gtfs2stn

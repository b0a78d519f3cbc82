#include "gtfs2stn/gtfs/time.h"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "gtfs2stn/error.h"

namespace gtfs2stn {

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
  if (s.empty()) {
    return false;
  }
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

time_s parse_time(std::string_view const text) {
  auto const s = trim(text);
  auto const c1 = s.find(':');
  auto const c2 = c1 == std::string_view::npos ? c1 : s.find(':', c1 + 1);
  unsigned h = 0U, m = 0U, sec = 0U;
  if (c2 == std::string_view::npos || c1 == 0 || c1 > 2 ||
      c2 - c1 != 3 || s.size() - c2 != 3 ||
      !parse_uint(s.substr(0, c1), h) ||
      !parse_uint(s.substr(c1 + 1, 2), m) ||
      !parse_uint(s.substr(c2 + 1, 2), sec) || m > 59 || sec > 59) {
    fail(error_code::bad_time, std::string{text});
  }
  auto const total = h * 3600U + m * 60U + sec;
  if (total >= static_cast<unsigned>(kMaxServiceTime)) {
    fail(error_code::bad_time, std::string{text} + " (beyond two service days)");
  }
  return static_cast<time_s>(total);
}

std::string format_time(time_s const t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", t / 3600, (t / 60) % 60,
                t % 60);
  return buf;
}

time_s parse_clock(std::string_view const text) {
  auto const s = trim(text);
  if (std::count(s.begin(), s.end(), ':') == 1) {
    return parse_time(std::string{s} + ":00");
  }
  return parse_time(s);
}

date parse_date(std::string_view const text) {
  auto const s = trim(text);
  unsigned y = 0U, m = 0U, d = 0U;
  if (s.size() != 8 || !parse_uint(s.substr(0, 4), y) ||
      !parse_uint(s.substr(4, 2), m) || !parse_uint(s.substr(6, 2), d)) {
    fail(error_code::bad_date, std::string{text});
  }
  auto const out = date{std::chrono::year{static_cast<int>(y)},
                        std::chrono::month{m}, std::chrono::day{d}};
  if (!out.ok()) {
    fail(error_code::bad_date, std::string{text});
  }
  return out;
}

std::string format_date(date const d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d%02u%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

unsigned weekday_index(date const d) {
  return std::chrono::weekday{std::chrono::sys_days{d}}.iso_encoding() - 1U;
}

}  // namespace gtfs2stn

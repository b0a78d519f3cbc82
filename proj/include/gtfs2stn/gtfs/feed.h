#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gtfs2stn/gtfs/time.h"

namespace gtfs2stn {

struct agency {
  friend bool operator==(agency const&, agency const&) = default;
  std::string id_, name_, url_, timezone_;
};

struct stop {
  friend bool operator==(stop const&, stop const&) = default;
  std::string id_, name_;
  double lat_{0.0}, lon_{0.0};
};

struct route {
  friend bool operator==(route const&, route const&) = default;
  std::string id_, agency_id_, short_name_, long_name_;
  int type_{3};
};

struct trip {
  friend bool operator==(trip const&, trip const&) = default;
  std::string id_, route_id_, service_id_;
  std::optional<std::string> shape_id_;
};

struct stop_time {
  friend bool operator==(stop_time const&, stop_time const&) = default;
  std::string trip_id_, stop_id_;
  std::uint32_t stop_sequence_{0U};
  time_s arrival_{0}, departure_{0};
};

struct service_calendar {
  friend bool operator==(service_calendar const&,
                         service_calendar const&) = default;
  std::string service_id_;
  std::array<bool, 7> weekdays_{};  // Monday..Sunday
  date start_, end_;
};

enum class exception_kind : std::uint8_t { added = 1U, removed = 2U };

struct calendar_exception {
  friend bool operator==(calendar_exception const&,
                         calendar_exception const&) = default;
  std::string service_id_;
  date date_;
  exception_kind kind_{exception_kind::added};
};

struct frequency {
  friend bool operator==(frequency const&, frequency const&) = default;
  std::string trip_id_;
  time_s start_{0}, end_{0}, headway_{0};
  bool exact_times_{false};
};

struct transfer {
  friend bool operator==(transfer const&, transfer const&) = default;
  std::string from_stop_id_, to_stop_id_;
  int type_{0};
  std::optional<time_s> min_transfer_;
};

struct shape_point {
  friend bool operator==(shape_point const&, shape_point const&) = default;
  std::string shape_id_;
  double lat_{0.0}, lon_{0.0};
  std::uint32_t sequence_{0U};
};

enum class severity : std::uint8_t { warning, fatal };

struct finding {
  friend bool operator==(finding const&, finding const&) = default;
  severity severity_{severity::warning};
  std::string table_;
  std::size_t row_{0U};
  std::string message_;
};

// In-memory image of one GTFS dataset. Immutable once loaded; call
// finalize() after editing tables by hand.
struct feed {
  // Sorts stop_times into trip order (by stop_sequence within a trip;
  // rows referencing unknown trips go last) and rebuilds id lookups.
  void finalize();

  std::optional<std::uint32_t> stop_idx(std::string_view id) const;
  std::optional<std::uint32_t> trip_idx(std::string_view id) const;

  std::span<stop_time const> trip_stop_times(std::uint32_t trip_idx) const;

  // Rows whose trip_id is not in trips.
  std::span<stop_time const> orphan_stop_times() const;

  // Every service id named by calendar or calendar_dates.
  std::set<std::string> service_ids() const;

  friend bool operator==(feed const& a, feed const& b) {
    return a.agencies_ == b.agencies_ && a.stops_ == b.stops_ &&
           a.routes_ == b.routes_ && a.trips_ == b.trips_ &&
           a.stop_times_ == b.stop_times_ && a.calendars_ == b.calendars_ &&
           a.calendar_exceptions_ == b.calendar_exceptions_ &&
           a.frequencies_ == b.frequencies_ && a.transfers_ == b.transfers_ &&
           a.shapes_ == b.shapes_;
  }

  std::vector<agency> agencies_;
  std::vector<stop> stops_;
  std::vector<route> routes_;
  std::vector<trip> trips_;
  std::vector<stop_time> stop_times_;
  std::vector<service_calendar> calendars_;
  std::vector<calendar_exception> calendar_exceptions_;
  std::optional<std::vector<frequency>> frequencies_;
  std::optional<std::vector<transfer>> transfers_;
  std::optional<std::vector<shape_point>> shapes_;

  // Non-fatal problems noticed while parsing (dropped duplicates etc.).
  std::vector<finding> load_findings_;

  // derived by finalize()
  std::vector<std::uint32_t> trip_offsets_;
  std::unordered_map<std::string, std::uint32_t> stop_lookup_, trip_lookup_;
};

// Raw table contents keyed by file name without extension ("stops").
using table_files = std::map<std::string, std::string>;

feed load_feed(std::filesystem::path const& source);
feed load_feed_from_zip(std::string_view archive_bytes);
feed load_feed_from_tables(table_files const&);

// Reads a directory or zip into raw table texts (no parsing).
table_files read_table_files(std::filesystem::path const& source);

// Inverse of load_feed_from_tables for every column the model keeps.
table_files to_table_files(feed const&);
void write_feed(feed const&, std::filesystem::path const& dir);

struct validation_report {
  bool has_fatal() const;
  std::string to_text() const;

  std::vector<finding> findings_;
  std::map<std::string, std::size_t> counts_;
};

validation_report validate(feed const&);

std::set<std::string> active_service_ids(feed const&, date);

// Throws UnknownServiceId for ids named nowhere in the calendars.
std::vector<std::string> trips_for_services(
    feed const&, std::set<std::string> const& services);

// Replaces every frequency-based template trip with explicit clones whose
// first departures run start, start+headway, ... strictly below end.
feed expand_frequencies(feed const&);

}  // namespace gtfs2stn

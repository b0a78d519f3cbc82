#include <charconv>
#include <fstream>
#include <sstream>

#include "gtfs2stn/error.h"
#include "gtfs2stn/gtfs/csv.h"
#include "gtfs2stn/gtfs/feed.h"

namespace fs = std::filesystem;

namespace gtfs2stn {

namespace {

std::string num(double const d) {
  char buf[32];
  auto const [ptr, ec] = std::to_chars(std::begin(buf), std::end(buf), d);
  return std::string(buf, ptr);
}

template <typename T>
std::string num(T const i) {
  return std::to_string(i);
}

struct table_writer {
  explicit table_writer(std::vector<std::string> header) {
    write_csv_row(out_, header);
  }
  void row(std::vector<std::string> const& fields) {
    write_csv_row(out_, fields);
  }
  std::string str() const { return out_.str(); }

  std::ostringstream out_;
};

}  // namespace

table_files to_table_files(feed const& f) {
  table_files files;

  {
    table_writer w{{"agency_id", "agency_name", "agency_url", "agency_timezone"}};
    for (auto const& a : f.agencies_) {
      w.row({a.id_, a.name_, a.url_, a.timezone_});
    }
    files["agency"] = w.str();
  }
  {
    table_writer w{{"stop_id", "stop_name", "stop_lat", "stop_lon"}};
    for (auto const& s : f.stops_) {
      w.row({s.id_, s.name_, num(s.lat_), num(s.lon_)});
    }
    files["stops"] = w.str();
  }
  {
    table_writer w{{"route_id", "agency_id", "route_short_name",
                    "route_long_name", "route_type"}};
    for (auto const& r : f.routes_) {
      w.row({r.id_, r.agency_id_, r.short_name_, r.long_name_, num(r.type_)});
    }
    files["routes"] = w.str();
  }
  {
    table_writer w{{"route_id", "service_id", "trip_id", "shape_id"}};
    for (auto const& t : f.trips_) {
      w.row({t.route_id_, t.service_id_, t.id_, t.shape_id_.value_or("")});
    }
    files["trips"] = w.str();
  }
  {
    table_writer w{{"trip_id", "arrival_time", "departure_time", "stop_id",
                    "stop_sequence"}};
    for (auto const& st : f.stop_times_) {
      w.row({st.trip_id_, format_time(st.arrival_), format_time(st.departure_),
             st.stop_id_, num(st.stop_sequence_)});
    }
    files["stop_times"] = w.str();
  }
  if (!f.calendars_.empty()) {
    table_writer w{{"service_id", "monday", "tuesday", "wednesday", "thursday",
                    "friday", "saturday", "sunday", "start_date", "end_date"}};
    for (auto const& c : f.calendars_) {
      std::vector<std::string> row{c.service_id_};
      for (auto const d : c.weekdays_) {
        row.emplace_back(d ? "1" : "0");
      }
      row.push_back(format_date(c.start_));
      row.push_back(format_date(c.end_));
      w.row(row);
    }
    files["calendar"] = w.str();
  }
  if (!f.calendar_exceptions_.empty() || f.calendars_.empty()) {
    table_writer w{{"service_id", "date", "exception_type"}};
    for (auto const& e : f.calendar_exceptions_) {
      w.row({e.service_id_, format_date(e.date_),
             num(static_cast<int>(e.kind_))});
    }
    files["calendar_dates"] = w.str();
  }
  if (f.frequencies_.has_value()) {
    table_writer w{{"trip_id", "start_time", "end_time", "headway_secs",
                    "exact_times"}};
    for (auto const& fr : *f.frequencies_) {
      w.row({fr.trip_id_, format_time(fr.start_), format_time(fr.end_),
             num(fr.headway_), fr.exact_times_ ? "1" : "0"});
    }
    files["frequencies"] = w.str();
  }
  if (f.transfers_.has_value()) {
    table_writer w{{"from_stop_id", "to_stop_id", "transfer_type",
                    "min_transfer_time"}};
    for (auto const& t : *f.transfers_) {
      w.row({t.from_stop_id_, t.to_stop_id_, num(t.type_),
             t.min_transfer_.has_value() ? num(*t.min_transfer_) : ""});
    }
    files["transfers"] = w.str();
  }
  if (f.shapes_.has_value()) {
    table_writer w{{"shape_id", "shape_pt_lat", "shape_pt_lon",
                    "shape_pt_sequence"}};
    for (auto const& p : *f.shapes_) {
      w.row({p.shape_id_, num(p.lat_), num(p.lon_), num(p.sequence_)});
    }
    files["shapes"] = w.str();
  }
  return files;
}

void write_feed(feed const& f, fs::path const& dir) {
  fs::create_directories(dir);
  for (auto const& [name, content] : to_table_files(f)) {
    auto const path = dir / (name + ".txt");
    std::ofstream out{path, std::ios::binary};
    if (!out) {
      fail(error_code::io, "cannot write " + path.string());
    }
    out << content;
  }
}

}  // namespace gtfs2stn

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gtfs2stn/error.h"
#include "gtfs2stn/gtfs/csv.h"
#include "gtfs2stn/gtfs/feed.h"
#include "gtfs2stn/gtfs/zip.h"

namespace fs = std::filesystem;

namespace gtfs2stn {

namespace {

struct table {
  table(std::string name, std::string_view content)
      : name_{std::move(name)}, csv_{parse_csv(content)} {}

  std::size_t required(std::string_view col) const {
    auto const idx = csv_.column(col);
    if (!idx.has_value()) {
      fail(error_code::malformed_row,
           name_ + " line 1: missing required column " + std::string{col});
    }
    return *idx;
  }

  std::optional<std::size_t> optional(std::string_view col) const {
    return csv_.column(col);
  }

  std::string_view get(std::size_t const row, std::size_t const col) const {
    auto const& r = csv_.rows_[row];
    return col < r.size() ? std::string_view{r[col]} : std::string_view{};
  }

  std::string_view get(std::size_t const row,
                       std::optional<std::size_t> const col) const {
    return col.has_value() ? get(row, *col) : std::string_view{};
  }

  [[noreturn]] void malformed(std::size_t const row,
                              std::string const& reason) const {
    fail(error_code::malformed_row,
         name_ + " line " + std::to_string(csv_.lines_[row]) + ": " + reason);
  }

  template <typename T>
  T number(std::size_t const row, std::size_t const col,
           std::string_view const what) const {
    auto const s = get(row, col);
    T out{};
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      malformed(row, "bad " + std::string{what} + " '" + std::string{s} + "'");
    }
    return out;
  }

  std::size_t size() const { return csv_.rows_.size(); }

  std::string name_;
  csv_table csv_;
};

std::optional<time_s> opt_time(std::string_view const s) {
  if (s.find_first_not_of(" \t") == std::string_view::npos) {
    return std::nullopt;
  }
  return parse_time(s);
}

struct raw_stop_time {
  stop_time st_;
  std::optional<time_s> arr_, dep_;
  std::size_t line_;
};

// Fills in blank arrival/departure values: a lone blank copies its partner,
// fully blank rows are interpolated by position between timed neighbours.
void resolve_times(std::vector<raw_stop_time>& group) {
  for (auto& r : group) {
    if (!r.arr_.has_value() && r.dep_.has_value()) {
      r.arr_ = r.dep_;
    } else if (!r.dep_.has_value() && r.arr_.has_value()) {
      r.dep_ = r.arr_;
    }
  }
  for (auto i = std::size_t{0U}; i != group.size(); ++i) {
    if (group[i].arr_.has_value()) {
      continue;
    }
    auto const prev = i == 0U ? group.size() : i - 1U;
    auto next = i + 1U;
    while (next < group.size() && !group[next].arr_.has_value()) {
      ++next;
    }
    if (prev == group.size() || next == group.size()) {
      fail(error_code::malformed_row,
           "stop_times line " + std::to_string(group[i].line_) +
               ": first/last stop of trip " + group[i].st_.trip_id_ +
               " has no times");
    }
    auto const t0 = *group[prev].dep_;
    auto const t1 = *group[next].arr_;
    auto const span = static_cast<std::int64_t>(next - prev);
    for (auto k = i; k != next; ++k) {
      auto const t = t0 + static_cast<time_s>(
                              (static_cast<std::int64_t>(t1 - t0) *
                               static_cast<std::int64_t>(k - prev)) /
                              span);
      group[k].arr_ = group[k].dep_ = t;
    }
    i = next - 1U;
  }
  for (auto& r : group) {
    r.st_.arrival_ = *r.arr_;
    r.st_.departure_ = *r.dep_;
  }
}

bool parse_flag(table const& t, std::size_t const row, std::size_t const col) {
  auto const v = t.get(row, col);
  if (v == "1") {
    return true;
  }
  if (v == "0" || v.empty()) {
    return false;
  }
  t.malformed(row, "expected 0/1, got '" + std::string{v} + "'");
}

void load_agencies(feed& f, table const& t) {
  auto const id = t.optional("agency_id");
  auto const name = t.required("agency_name");
  auto const url = t.required("agency_url");
  auto const tz = t.required("agency_timezone");
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    f.agencies_.push_back(agency{std::string{t.get(r, id)},
                                 std::string{t.get(r, name)},
                                 std::string{t.get(r, url)},
                                 std::string{t.get(r, tz)}});
  }
}

void load_stops(feed& f, table const& t) {
  auto const id = t.required("stop_id");
  auto const name = t.optional("stop_name");
  auto const lat = t.optional("stop_lat");
  auto const lon = t.optional("stop_lon");
  std::set<std::string_view> seen;
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    auto const stop_id = t.get(r, id);
    if (stop_id.empty()) {
      t.malformed(r, "empty stop_id");
    }
    if (t.get(r, lat).empty() || t.get(r, lon).empty()) {
      f.load_findings_.push_back(
          {severity::warning, "stops", r + 1U,
           "stop " + std::string{stop_id} + " has no coordinates; skipped"});
      continue;
    }
    if (!seen.insert(stop_id).second) {
      f.load_findings_.push_back(
          {severity::warning, "stops", r + 1U,
           "duplicate stop_id " + std::string{stop_id} + "; kept first"});
      continue;
    }
    f.stops_.push_back(stop{std::string{stop_id}, std::string{t.get(r, name)},
                            t.number<double>(r, *lat, "stop_lat"),
                            t.number<double>(r, *lon, "stop_lon")});
  }
}

void load_routes(feed& f, table const& t) {
  auto const id = t.required("route_id");
  auto const agency_id = t.optional("agency_id");
  auto const short_name = t.optional("route_short_name");
  auto const long_name = t.optional("route_long_name");
  auto const type = t.required("route_type");
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    f.routes_.push_back(route{std::string{t.get(r, id)},
                              std::string{t.get(r, agency_id)},
                              std::string{t.get(r, short_name)},
                              std::string{t.get(r, long_name)},
                              t.number<int>(r, type, "route_type")});
  }
}

void load_trips(feed& f, table const& t) {
  auto const route_id = t.required("route_id");
  auto const service_id = t.required("service_id");
  auto const id = t.required("trip_id");
  auto const shape_id = t.optional("shape_id");
  std::set<std::string_view> seen;
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    auto const trip_id = t.get(r, id);
    if (trip_id.empty()) {
      t.malformed(r, "empty trip_id");
    }
    if (!seen.insert(trip_id).second) {
      f.load_findings_.push_back(
          {severity::warning, "trips", r + 1U,
           "duplicate trip_id " + std::string{trip_id} + "; kept first"});
      continue;
    }
    auto const shape = t.get(r, shape_id);
    f.trips_.push_back(trip{
        std::string{trip_id}, std::string{t.get(r, route_id)},
        std::string{t.get(r, service_id)},
        shape.empty() ? std::nullopt : std::optional{std::string{shape}}});
  }
}

void load_stop_times(feed& f, table const& t) {
  auto const trip_id = t.required("trip_id");
  auto const arr = t.required("arrival_time");
  auto const dep = t.required("departure_time");
  auto const stop_id = t.required("stop_id");
  auto const seq = t.required("stop_sequence");

  std::vector<raw_stop_time> raw;
  raw.reserve(t.size());
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    raw_stop_time st;
    st.st_.trip_id_ = t.get(r, trip_id);
    st.st_.stop_id_ = t.get(r, stop_id);
    st.st_.stop_sequence_ = t.number<std::uint32_t>(r, seq, "stop_sequence");
    st.arr_ = opt_time(t.get(r, arr));
    st.dep_ = opt_time(t.get(r, dep));
    st.line_ = t.csv_.lines_[r];
    raw.emplace_back(std::move(st));
  }

  std::stable_sort(begin(raw), end(raw), [](auto const& a, auto const& b) {
    return std::tie(a.st_.trip_id_, a.st_.stop_sequence_) <
           std::tie(b.st_.trip_id_, b.st_.stop_sequence_);
  });

  f.stop_times_.reserve(raw.size());
  for (auto lb = begin(raw); lb != end(raw);) {
    auto const ub = std::find_if(lb, end(raw), [&](auto const& x) {
      return x.st_.trip_id_ != lb->st_.trip_id_;
    });
    std::vector<raw_stop_time> group;
    for (auto it = lb; it != ub; ++it) {
      if (!group.empty() &&
          group.back().st_.stop_sequence_ == it->st_.stop_sequence_) {
        f.load_findings_.push_back(
            {severity::warning, "stop_times", it->line_ - 1U,
             "duplicate (trip_id, stop_sequence) = (" + it->st_.trip_id_ +
                 ", " + std::to_string(it->st_.stop_sequence_) +
                 "); kept first"});
        continue;
      }
      group.push_back(*it);
    }
    resolve_times(group);
    for (auto& g : group) {
      f.stop_times_.emplace_back(std::move(g.st_));
    }
    lb = ub;
  }
}

void load_calendar(feed& f, table const& t) {
  auto const id = t.required("service_id");
  constexpr std::array<char const*, 7> kDays = {
      "monday", "tuesday", "wednesday", "thursday",
      "friday", "saturday", "sunday"};
  std::array<std::size_t, 7> cols{};
  for (auto d = 0U; d != 7U; ++d) {
    cols[d] = t.required(kDays[d]);
  }
  auto const start = t.required("start_date");
  auto const end = t.required("end_date");
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    service_calendar c;
    c.service_id_ = t.get(r, id);
    for (auto d = 0U; d != 7U; ++d) {
      c.weekdays_[d] = parse_flag(t, r, cols[d]);
    }
    c.start_ = parse_date(t.get(r, start));
    c.end_ = parse_date(t.get(r, end));
    f.calendars_.emplace_back(std::move(c));
  }
}

void load_calendar_dates(feed& f, table const& t) {
  auto const id = t.required("service_id");
  auto const d = t.required("date");
  auto const type = t.required("exception_type");
  std::set<std::pair<std::string, date>> seen;
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    calendar_exception e;
    e.service_id_ = t.get(r, id);
    e.date_ = parse_date(t.get(r, d));
    auto const k = t.number<int>(r, type, "exception_type");
    if (k != 1 && k != 2) {
      t.malformed(r, "exception_type must be 1 or 2");
    }
    e.kind_ = static_cast<exception_kind>(k);
    if (!seen.emplace(e.service_id_, e.date_).second) {
      f.load_findings_.push_back(
          {severity::warning, "calendar_dates", r + 1U,
           "duplicate exception for " + e.service_id_ + " on " +
               format_date(e.date_) + "; kept first"});
      continue;
    }
    f.calendar_exceptions_.emplace_back(std::move(e));
  }
}

void load_frequencies(feed& f, table const& t) {
  auto const id = t.required("trip_id");
  auto const start = t.required("start_time");
  auto const end = t.required("end_time");
  auto const headway = t.required("headway_secs");
  auto const exact = t.optional("exact_times");
  auto& out = f.frequencies_.emplace();
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    frequency fr;
    fr.trip_id_ = t.get(r, id);
    fr.start_ = parse_time(t.get(r, start));
    fr.end_ = parse_time(t.get(r, end));
    fr.headway_ = t.number<time_s>(r, headway, "headway_secs");
    fr.exact_times_ = exact.has_value() && parse_flag(t, r, *exact);
    if (fr.headway_ <= 0 || fr.start_ >= fr.end_) {
      t.malformed(r, "frequency needs start < end and headway > 0");
    }
    out.emplace_back(std::move(fr));
  }
}

void load_transfers(feed& f, table const& t) {
  auto const from = t.required("from_stop_id");
  auto const to = t.required("to_stop_id");
  auto const type = t.optional("transfer_type");
  auto const min = t.optional("min_transfer_time");
  auto& out = f.transfers_.emplace();
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    transfer tr;
    tr.from_stop_id_ = t.get(r, from);
    tr.to_stop_id_ = t.get(r, to);
    tr.type_ = (type.has_value() && !t.get(r, *type).empty())
                   ? t.number<int>(r, *type, "transfer_type")
                   : 0;
    if (min.has_value() && !t.get(r, *min).empty()) {
      tr.min_transfer_ = t.number<time_s>(r, *min, "min_transfer_time");
      if (*tr.min_transfer_ < 0) {
        t.malformed(r, "negative min_transfer_time");
      }
    }
    out.emplace_back(std::move(tr));
  }
}

void load_shapes(feed& f, table const& t) {
  auto const id = t.required("shape_id");
  auto const lat = t.required("shape_pt_lat");
  auto const lon = t.required("shape_pt_lon");
  auto const seq = t.required("shape_pt_sequence");
  auto& out = f.shapes_.emplace();
  for (auto r = std::size_t{0U}; r != t.size(); ++r) {
    out.push_back(shape_point{std::string{t.get(r, id)},
                              t.number<double>(r, lat, "shape_pt_lat"),
                              t.number<double>(r, lon, "shape_pt_lon"),
                              t.number<std::uint32_t>(r, seq,
                                                      "shape_pt_sequence")});
  }
  std::stable_sort(begin(out), end(out), [](auto const& a, auto const& b) {
    return std::tie(a.shape_id_, a.sequence_) <
           std::tie(b.shape_id_, b.sequence_);
  });
}

std::string read_file(fs::path const& p) {
  std::ifstream in{p, std::ios::binary};
  if (!in) {
    fail(error_code::io, "cannot open " + p.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

table_files read_table_files(fs::path const& source) {
  if (!fs::exists(source)) {
    fail(error_code::io, "no such feed source: " + source.string());
  }
  table_files files;
  if (fs::is_directory(source)) {
    for (auto const& e : fs::directory_iterator{source}) {
      if (e.is_regular_file() && e.path().extension() == ".txt") {
        files.emplace(e.path().stem().string(), read_file(e.path()));
      }
    }
    return files;
  }
  for (auto& [name, content] : read_zip(read_file(source))) {
    auto const p = fs::path{name};
    if (p.extension() == ".txt") {
      files.emplace(p.stem().string(), std::move(content));
    }
  }
  return files;
}

feed load_feed(fs::path const& source) {
  return load_feed_from_tables(read_table_files(source));
}

feed load_feed_from_zip(std::string_view const archive_bytes) {
  table_files files;
  for (auto& [name, content] : read_zip(archive_bytes)) {
    auto const p = fs::path{name};
    if (p.extension() == ".txt") {
      files.emplace(p.stem().string(), std::move(content));
    }
  }
  return load_feed_from_tables(files);
}

feed load_feed_from_tables(table_files const& files) {
  for (auto const* required :
       {"agency", "stops", "routes", "trips", "stop_times"}) {
    if (!files.contains(required)) {
      fail(error_code::missing_table, required);
    }
  }
  if (!files.contains("calendar") && !files.contains("calendar_dates")) {
    fail(error_code::missing_table, "calendar");
  }

  auto const with = [&](char const* name, auto&& fn) {
    if (auto const it = files.find(name); it != end(files)) {
      fn(table{name, it->second});
    }
  };

  feed f;
  with("agency", [&](table const& t) { load_agencies(f, t); });
  with("stops", [&](table const& t) { load_stops(f, t); });
  with("routes", [&](table const& t) { load_routes(f, t); });
  with("trips", [&](table const& t) { load_trips(f, t); });
  with("stop_times", [&](table const& t) { load_stop_times(f, t); });
  with("calendar", [&](table const& t) { load_calendar(f, t); });
  with("calendar_dates", [&](table const& t) { load_calendar_dates(f, t); });
  with("frequencies", [&](table const& t) { load_frequencies(f, t); });
  with("transfers", [&](table const& t) { load_transfers(f, t); });
  with("shapes", [&](table const& t) { load_shapes(f, t); });
  f.finalize();
  return f;
}

void feed::finalize() {
  stop_lookup_.clear();
  trip_lookup_.clear();
  for (auto i = 0U; i != stops_.size(); ++i) {
    stop_lookup_.emplace(stops_[i].id_, i);
  }
  for (auto i = 0U; i != trips_.size(); ++i) {
    trip_lookup_.emplace(trips_[i].id_, i);
  }

  auto const n_trips = static_cast<std::uint32_t>(trips_.size());
  auto const key = [&](stop_time const& st) {
    auto const it = trip_lookup_.find(st.trip_id_);
    return it == end(trip_lookup_) ? n_trips : it->second;
  };
  std::stable_sort(begin(stop_times_), end(stop_times_),
                   [&](stop_time const& a, stop_time const& b) {
                     auto const ka = key(a), kb = key(b);
                     if (ka != kb) {
                       return ka < kb;
                     }
                     if (ka == n_trips && a.trip_id_ != b.trip_id_) {
                       return a.trip_id_ < b.trip_id_;
                     }
                     return a.stop_sequence_ < b.stop_sequence_;
                   });

  trip_offsets_.assign(trips_.size() + 1U, 0U);
  for (auto const& st : stop_times_) {
    if (auto const k = key(st); k != n_trips) {
      ++trip_offsets_[k + 1U];
    }
  }
  for (auto i = std::size_t{1U}; i < trip_offsets_.size(); ++i) {
    trip_offsets_[i] += trip_offsets_[i - 1U];
  }
}

std::optional<std::uint32_t> feed::stop_idx(std::string_view const id) const {
  auto const it = stop_lookup_.find(std::string{id});
  return it == end(stop_lookup_) ? std::nullopt : std::optional{it->second};
}

std::optional<std::uint32_t> feed::trip_idx(std::string_view const id) const {
  auto const it = trip_lookup_.find(std::string{id});
  return it == end(trip_lookup_) ? std::nullopt : std::optional{it->second};
}

std::span<stop_time const> feed::trip_stop_times(std::uint32_t const t) const {
  return std::span{stop_times_}.subspan(
      trip_offsets_[t], trip_offsets_[t + 1U] - trip_offsets_[t]);
}

std::span<stop_time const> feed::orphan_stop_times() const {
  auto const n = trip_offsets_.empty() ? 0U : trip_offsets_.back();
  return std::span{stop_times_}.subspan(n);
}

std::set<std::string> feed::service_ids() const {
  std::set<std::string> ids;
  for (auto const& c : calendars_) {
    ids.insert(c.service_id_);
  }
  for (auto const& e : calendar_exceptions_) {
    ids.insert(e.service_id_);
  }
  return ids;
}

}  // namespace gtfs2stn

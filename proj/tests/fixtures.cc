#include "fixtures.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace gtfs2stn::testing {

namespace {

constexpr auto kAgency =
    "agency_id,agency_name,agency_url,agency_timezone\n"
    "MTA,Metro Test Agency,https://example.org,America/Chicago\n";

constexpr auto kCalendar =
    "service_id,monday,tuesday,wednesday,thursday,friday,saturday,sunday,"
    "start_date,end_date\n"
    "WKDY,1,1,1,1,1,0,0,20210411,20211002\n"
    "WKND,0,0,0,0,0,1,1,20210411,20211002\n";

constexpr auto kThreeRouteStops =
    "stop_id,stop_name,stop_lat,stop_lon\n"
    "A1,A1 Church St,36.16,-86.8\n"
    "A2,A2 Broadway,36.16,-86.79\n"
    "A3,A3 Main St,36.16,-86.78\n"
    "B1,B1 Main St North,36.1612,-86.78\n"
    "B2,B2 Jefferson,36.17,-86.78\n"
    "B3,B3 Cumberland,36.18,-86.78\n"
    "C1,C1 Cumberland North,36.183,-86.78\n"
    "C2,C2 Dickerson,36.183,-86.77\n"
    "C3,C3 Trinity,36.183,-86.76\n";

constexpr auto kThreeRouteRoutes =
    "route_id,agency_id,route_short_name,route_long_name,route_type\n"
    "R1,MTA,1,West End,3\n"
    "R2,MTA,2,Northbound,3\n"
    "R3,MTA,3,Eastbound,3\n";

std::string hms(int const t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", t / 3600, (t / 60) % 60,
                t % 60);
  return buf;
}

struct trip_def {
  std::string route_, service_, id_;
  std::vector<std::string> stops_;
  std::vector<std::pair<int, int>> times_;  // (arrival, departure)
};

void emit(std::ostringstream& trips, std::ostringstream& stop_times,
          trip_def const& t) {
  trips << t.route_ << ',' << t.service_ << ',' << t.id_ << '\n';
  for (auto i = 0U; i != t.stops_.size(); ++i) {
    stop_times << t.id_ << ',' << hms(t.times_[i].first) << ','
               << hms(t.times_[i].second) << ',' << t.stops_[i] << ','
               << (i + 1U) << '\n';
  }
}

std::vector<trip_def> three_route_trips() {
  std::vector<trip_def> trips;
  auto const add = [&](std::string const& route, char const prefix,
                       std::vector<int> const& deps, int const run1,
                       int const dwell, int const run2) {
    for (auto k = 0U; k != deps.size(); ++k) {
      auto const d = deps[k];
      trips.push_back(
          {route, k % 2U == 0U ? "WKDY" : "WKND",
           route + "_" + std::to_string(k + 1U),
           {std::string{prefix} + "1", std::string{prefix} + "2",
            std::string{prefix} + "3"},
           {{d, d},
            {d + run1, d + run1 + dwell},
            {d + run1 + dwell + run2, d + run1 + dwell + run2}}});
    }
  };
  auto const h = [](int const hh, int const mm) { return hh * 3600 + mm * 60; };
  add("R1", 'A', {h(7, 0), h(7, 30), h(8, 0), h(8, 30)}, 480, 60, 420);
  add("R2", 'B', {h(7, 20), h(7, 50), h(8, 20), h(8, 50)}, 360, 60, 420);
  add("R3", 'C', {h(7, 40), h(8, 10), h(8, 40), h(9, 10)}, 300, 0, 300);
  return trips;
}

table_files make_tables(std::string stops, std::string routes,
                        std::vector<trip_def> const& trips) {
  std::ostringstream t, st;
  t << "route_id,service_id,trip_id\n";
  st << "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n";
  for (auto const& trip : trips) {
    emit(t, st, trip);
  }
  return {{"agency", kAgency},
          {"stops", std::move(stops)},
          {"routes", std::move(routes)},
          {"trips", t.str()},
          {"stop_times", st.str()},
          {"calendar", kCalendar}};
}

}  // namespace

table_files three_route_tables() {
  return make_tables(kThreeRouteStops, kThreeRouteRoutes, three_route_trips());
}

table_files doubled_three_route_tables() {
  auto trips = three_route_trips();
  auto const n = trips.size();
  for (auto i = 0U; i != n; ++i) {
    auto copy = trips[i];
    copy.id_ += "_x2";
    trips.push_back(copy);
  }
  return make_tables(kThreeRouteStops, kThreeRouteRoutes, trips);
}

table_files single_trip_tables() {
  auto const h = [](int const hh, int const mm) { return hh * 3600 + mm * 60; };
  return make_tables(
      "stop_id,stop_name,stop_lat,stop_lon\n"
      "S1,First,36.16,-86.78\n"
      "S2,Second,36.17,-86.78\n"
      "S3,Third,36.1727,-86.78\n",
      "route_id,agency_id,route_short_name,route_long_name,route_type\n"
      "R,MTA,9,Single,3\n",
      {{"R",
        "WKDY",
        "T1",
        {"S1", "S2", "S3"},
        {{h(8, 0), h(8, 1)}, {h(8, 5), h(8, 6)}, {h(8, 9), h(8, 10)}}}});
}

table_files grid_tables() {
  auto const h = [](int const hh, int const mm) { return hh * 3600 + mm * 60; };
  std::vector<trip_def> trips;
  for (auto k = 0; k != 5; ++k) {
    auto const d = h(8, 0) + k * 30 * 60;
    trips.push_back({"G", "WKDY", "G_" + std::to_string(k + 1),
                     {"G1", "G3"}, {{d, d}, {d + 600, d + 600}}});
  }
  return make_tables(
      "stop_id,stop_name,stop_lat,stop_lon\n"
      "G1,Visited,36.0025,-86.0025\n"
      "G2,Idle,36.005,-86.005\n"
      "G3,Alone,36.0475,-86.0025\n",
      "route_id,agency_id,route_short_name,route_long_name,route_type\n"
      "G,MTA,G,Grid,3\n",
      trips);
}

table_files frequency_tables() {
  return {
      {"agency", kAgency},
      {"stops",
       "\xEF\xBB\xBFstop_id,stop_name,stop_lat,stop_lon,zone_id\n"
       "F1,\"Depot, North\",36.15,-86.8,z1\n"
       "F2,\"The \"\"Loop\"\"\",36.151,-86.8,z1\n"
       "F3,Plain,36.16,-86.8,z2\n"
       "F4,Far,36.2,-86.7,z3\n"},
      {"routes",
       "route_id,agency_id,route_short_name,route_long_name,route_type\r\n"
       "F,MTA,F,Frequent,3\r\n"
       "L,MTA,L,Local,3\r\n"},
      {"trips",
       "route_id,service_id,trip_id,shape_id\n"
       "F,DAILY,FT,SH1\n"
       "L,DAILY,L1,\n"},
      {"stop_times",
       "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n"
       "FT,0:00:00,0:00:00,F1,1\n"
       "FT,0:05:00,0:05:30,F2,2\n"
       "FT,0:12:00,0:12:00,F3,3\n"
       "L1,25:10:00,25:10:00,F3,1\n"
       "L1,25:40:00,25:40:00,F4,2\n"},
      {"calendar",
       "service_id,monday,tuesday,wednesday,thursday,friday,saturday,sunday,"
       "start_date,end_date\n"
       "DAILY,1,1,1,1,1,1,1,20210101,20211231\n"},
      {"calendar_dates",
       "service_id,date,exception_type\n"
       "DAILY,20211225,2\n"
       "HOLIDAY,20211225,1\n"},
      {"frequencies",
       "trip_id,start_time,end_time,headway_secs,exact_times\n"
       "FT,08:00:00,10:00:00,1800,1\n"},
      {"transfers",
       "from_stop_id,to_stop_id,transfer_type,min_transfer_time\n"
       "F1,F2,2,120\n"
       "F2,F3,0,\n"},
      {"shapes",
       "shape_id,shape_pt_lat,shape_pt_lon,shape_pt_sequence\n"
       "SH1,36.15,-86.8,1\n"
       "SH1,36.1505,-86.8,2\n"
       "SH1,36.151,-86.8,3\n"
       "SH1,36.16,-86.8,4\n"}};
}

table_files random_three_route_tables(std::uint32_t const seed) {
  std::mt19937 rng{seed};
  auto const uni = [&](int const lo, int const hi) {
    return std::uniform_int_distribution<int>{lo, hi}(rng);
  };
  std::vector<trip_def> trips;
  for (auto const [route, prefix] :
       {std::pair{"R1", 'A'}, std::pair{"R2", 'B'}, std::pair{"R3", 'C'}}) {
    auto const n = uni(2, 6);
    for (auto k = 0; k != n; ++k) {
      auto const d = uni(6 * 3600, 10 * 3600) / 60 * 60;
      auto const run1 = uni(1, 15) * 60;
      auto const dwell = uni(0, 2) * 30;
      auto const run2 = uni(1, 15) * 60;
      trips.push_back(
          {route, k % 2 == 0 ? "WKDY" : "WKND",
           std::string{route} + "_" + std::to_string(k + 1),
           {std::string{prefix} + "1", std::string{prefix} + "2",
            std::string{prefix} + "3"},
           {{d, d},
            {d + run1, d + run1 + dwell},
            {d + run1 + dwell + run2, d + run1 + dwell + run2}}});
    }
  }
  return make_tables(kThreeRouteStops, kThreeRouteRoutes, trips);
}

feed lattice_feed(std::uint32_t const rows, std::uint32_t const cols,
                  double const spacing_m, std::uint32_t const route_len,
                  std::size_t const target_events) {
  constexpr auto kLat0 = 36.0, kLon0 = -86.9;
  constexpr auto kMetersPerDeg = 6'371'000.0 * std::numbers::pi / 180.0;
  auto const dlat = spacing_m / kMetersPerDeg;
  auto const dlon = dlat / std::cos(kLat0 * std::numbers::pi / 180.0);

  feed f;
  f.agencies_.push_back({"MTA", "Metro Test Agency", "https://example.org",
                         "America/Chicago"});
  for (auto r = 0U; r != rows; ++r) {
    for (auto c = 0U; c != cols; ++c) {
      auto const id = "L" + std::to_string(r) + "_" + std::to_string(c);
      f.stops_.push_back({id, id, kLat0 + r * dlat, kLon0 + c * dlon});
    }
  }
  f.calendars_.push_back({"DAILY",
                          {true, true, true, true, true, true, true},
                          parse_date("20210101"),
                          parse_date("20211231")});

  auto const routes_per_row = (cols + route_len - 1U) / route_len;
  auto const n_routes = rows * routes_per_row;
  auto const trips_per_route = std::max<std::size_t>(
      1U, target_events / (static_cast<std::size_t>(n_routes) * route_len));

  std::mt19937 rng{42U};
  for (auto r = 0U; r != rows; ++r) {
    for (auto k = 0U; k != routes_per_row; ++k) {
      auto const first = k * route_len;
      auto const last = std::min(cols, first + route_len);
      auto const route_id = "LR" + std::to_string(r) + "_" + std::to_string(k);
      f.routes_.push_back({route_id, "MTA", route_id, route_id, 3});
      auto const offset =
          std::uniform_int_distribution<int>{0, 600}(rng);
      for (auto t = std::size_t{0U}; t != trips_per_route; ++t) {
        auto const trip_id = route_id + "_" + std::to_string(t);
        f.trips_.push_back({trip_id, route_id, "DAILY", std::nullopt});
        auto const reverse = t % 2U == 1U;
        auto time = static_cast<time_s>(5 * 3600 + offset + t * 480);
        for (auto i = 0U; i != last - first; ++i) {
          auto const c = reverse ? last - 1U - i : first + i;
          f.stop_times_.push_back(
              {trip_id, "L" + std::to_string(r) + "_" + std::to_string(c),
               i + 1U, time, time + 20});
          time += 20 + 60;
        }
      }
    }
  }
  f.finalize();
  return f;
}

feed load(table_files const& t) { return load_feed_from_tables(t); }

fs::path temp_dir(std::string const& name) {
  auto const dir = fs::temp_directory_path() /
                   ("gtfs2stn_test_" + name + "_" +
                    std::to_string(std::random_device{}()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_tables(fs::path const& dir, table_files const& t) {
  fs::create_directories(dir);
  for (auto const& [name, content] : t) {
    std::ofstream{dir / (name + ".txt"), std::ios::binary} << content;
  }
}

}  // namespace gtfs2stn::testing

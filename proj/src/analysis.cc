#include "gtfs2stn/analysis.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "gtfs2stn/error.h"

namespace gtfs2stn {

rational::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    fail(error_code::invalid_argument, "zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  auto const g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

rational operator-(rational const& a, rational const& b) {
  auto const g = std::gcd(a.den_, b.den_);
  return {a.num_ * (b.den_ / g) - b.num_ * (a.den_ / g), a.den_ / g * b.den_};
}

rational operator*(rational const& a, rational const& b) {
  auto const g1 = std::gcd(a.num_, b.den_);
  auto const g2 = std::gcd(b.num_, a.den_);
  return {(a.num_ / (g1 == 0 ? 1 : g1)) * (b.num_ / (g2 == 0 ? 1 : g2)),
          (a.den_ / (g2 == 0 ? 1 : g2)) * (b.den_ / (g1 == 0 ? 1 : g1))};
}

std::optional<cell_key> grid_spec::cell_of(geo_point const p) const {
  auto const row = std::floor((p.lat_ - min_lat_) / cell_size_deg_);
  auto const col = std::floor((p.lon_ - min_lon_) / cell_size_deg_);
  if (!(row >= 0.0) || !(col >= 0.0) || row >= n_rows_ || col >= n_cols_) {
    return std::nullopt;
  }
  return cell_key{static_cast<std::uint32_t>(row),
                  static_cast<std::uint32_t>(col)};
}

grid_spec grid_covering(feed const& f, double const cell_size_deg) {
  if (!(cell_size_deg > 0.0)) {
    fail(error_code::invalid_argument, "cell size must be > 0");
  }
  if (f.stops_.empty()) {
    fail(error_code::invalid_argument, "feed has no stops");
  }
  auto min_lat = f.stops_.front().lat_, max_lat = min_lat;
  auto min_lon = f.stops_.front().lon_, max_lon = min_lon;
  for (auto const& s : f.stops_) {
    min_lat = std::min(min_lat, s.lat_);
    max_lat = std::max(max_lat, s.lat_);
    min_lon = std::min(min_lon, s.lon_);
    max_lon = std::max(max_lon, s.lon_);
  }
  return {min_lat, min_lon, cell_size_deg,
          static_cast<std::uint32_t>(
              std::floor((max_lat - min_lat) / cell_size_deg)) + 1U,
          static_cast<std::uint32_t>(
              std::floor((max_lon - min_lon) / cell_size_deg)) + 1U};
}

std::map<std::string, std::uint64_t> stop_visit_counts(
    feed const& input, std::set<std::string> const& services,
    time_window const w) {
  if (w.start_ >= w.end_) {
    fail(error_code::invalid_argument, "window start must precede its end");
  }
  auto const f = expand_frequencies(input);
  std::map<std::string, std::uint64_t> counts;
  for (auto const& s : f.stops_) {
    counts.emplace(s.id_, 0U);
  }
  for (auto const& trip_id : trips_for_services(f, services)) {
    for (auto const& st : f.trip_stop_times(*f.trip_idx(trip_id))) {
      if (st.arrival_ >= w.start_ && st.arrival_ < w.end_) {
        ++counts[st.stop_id_];
      }
    }
  }
  return counts;
}

grid_frequency_map grid_frequency(feed const& f,
                                  std::set<std::string> const& services,
                                  grid_spec const& spec, time_window const w,
                                  std::string label) {
  if (!(spec.cell_size_deg_ > 0.0) || spec.n_rows_ == 0U ||
      spec.n_cols_ == 0U) {
    fail(error_code::invalid_argument, "degenerate grid");
  }
  auto const visits = stop_visit_counts(f, services, w);

  grid_frequency_map m;
  m.spec_ = spec;
  m.window_ = w;
  m.label_ = std::move(label);
  for (auto const& s : f.stops_) {
    auto const cell = spec.cell_of({s.lat_, s.lon_});
    if (!cell.has_value()) {
      fail(error_code::stop_outside_grid, s.id_);
    }
    auto& c = m.cells_[*cell];
    c.row_ = cell->first;
    c.col_ = cell->second;
    ++c.stop_count_;
    if (auto const it = visits.find(s.id_); it != end(visits)) {
      c.visit_count_ += it->second;
    }
  }
  for (auto& [key, c] : m.cells_) {
    c.avg_frequency_ =
        rational{static_cast<std::int64_t>(c.visit_count_) * 3600,
                 static_cast<std::int64_t>(c.stop_count_) * w.duration()};
  }
  return m;
}

grid_difference grid_diff(grid_frequency_map const& a,
                          grid_frequency_map const& b) {
  if (!(a.spec_ == b.spec_)) {
    fail(error_code::grid_mismatch, "grids differ in extent or cell size");
  }
  grid_difference d;
  d.spec_ = a.spec_;
  if (a.window_.duration() != b.window_.duration()) {
    d.warnings_.push_back("windows differ in duration (" +
                          std::to_string(a.window_.duration()) + " s vs " +
                          std::to_string(b.window_.duration()) + " s)");
  }
  auto const value = [](grid_frequency_map const& m, cell_key const& k) {
    auto const it = m.cells_.find(k);
    return it == end(m.cells_) ? rational{} : it->second.avg_frequency_;
  };
  for (auto const* m : {&a, &b}) {
    for (auto const& [k, c] : m->cells_) {
      d.cells_.emplace(k, value(b, k) - value(a, k));
    }
  }
  return d;
}

namespace {

using json = nlohmann::json;

json cell_polygon(grid_spec const& spec, cell_key const& k) {
  auto const lat0 = spec.min_lat_ + k.first * spec.cell_size_deg_;
  auto const lon0 = spec.min_lon_ + k.second * spec.cell_size_deg_;
  auto const lat1 = lat0 + spec.cell_size_deg_;
  auto const lon1 = lon0 + spec.cell_size_deg_;
  return {{"type", "Polygon"},
          {"coordinates",
           {{{lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1},
             {lon0, lat0}}}}};
}

json spec_json(grid_spec const& s) {
  return {{"min_lat", s.min_lat_},
          {"min_lon", s.min_lon_},
          {"cell_size_deg", s.cell_size_deg_},
          {"n_rows", s.n_rows_},
          {"n_cols", s.n_cols_}};
}

}  // namespace

std::string grid_geojson(grid_frequency_map const& m) {
  auto features = json::array();
  for (auto const& [k, c] : m.cells_) {
    features.push_back(
        {{"type", "Feature"},
         {"geometry", cell_polygon(m.spec_, k)},
         {"properties",
          {{"row", c.row_},
           {"col", c.col_},
           {"stop_count", c.stop_count_},
           {"visit_count", c.visit_count_},
           {"avg_frequency", c.avg_frequency_.to_double()},
           {"avg_frequency_num", c.avg_frequency_.num_},
           {"avg_frequency_den", c.avg_frequency_.den_}}}});
  }
  return json{{"type", "FeatureCollection"},
              {"grid", spec_json(m.spec_)},
              {"window", {{"start_s", m.window_.start_},
                          {"end_s", m.window_.end_}}},
              {"label", m.label_},
              {"features", features}}
      .dump();
}

std::string grid_diff_geojson(grid_difference const& d) {
  auto max_abs = 0.0;
  for (auto const& [k, v] : d.cells_) {
    max_abs = std::max(max_abs, std::abs(v.to_double()));
  }
  auto features = json::array();
  for (auto const& [k, v] : d.cells_) {
    auto const value = v.to_double();
    auto const normalized =
        max_abs == 0.0 ? 0.0
                       : (std::abs(value) == max_abs
                              ? (value > 0.0 ? 1.0 : -1.0)
                              : value / max_abs);
    features.push_back({{"type", "Feature"},
                        {"geometry", cell_polygon(d.spec_, k)},
                        {"properties",
                         {{"row", k.first},
                          {"col", k.second},
                          {"diff", value},
                          {"diff_num", v.num_},
                          {"diff_den", v.den_},
                          {"normalized", normalized}}}});
  }
  return json{{"type", "FeatureCollection"},
              {"grid", spec_json(d.spec_)},
              {"warnings", d.warnings_},
              {"features", features}}
      .dump();
}

std::string grid_table(grid_frequency_map const& m) {
  std::ostringstream out;
  out << "row,col,stop_count,visit_count,avg_frequency\n";
  for (auto const& [k, c] : m.cells_) {
    out << c.row_ << ',' << c.col_ << ',' << c.stop_count_ << ','
        << c.visit_count_ << ',' << c.avg_frequency_.to_double() << '\n';
  }
  return out.str();
}

std::string grid_diff_table(grid_difference const& d) {
  std::ostringstream out;
  out << "row,col,diff\n";
  for (auto const& [k, v] : d.cells_) {
    out << k.first << ',' << k.second << ',' << v.to_double() << '\n';
  }
  return out.str();
}

grid_frequency_map parse_grid_geojson(std::string_view const text) {
  try {
    auto const doc = json::parse(text);
    grid_frequency_map m;
    auto const& g = doc.at("grid");
    m.spec_ = {g.at("min_lat").get<double>(), g.at("min_lon").get<double>(),
               g.at("cell_size_deg").get<double>(),
               g.at("n_rows").get<std::uint32_t>(),
               g.at("n_cols").get<std::uint32_t>()};
    m.window_ = {doc.at("window").at("start_s").get<time_s>(),
                 doc.at("window").at("end_s").get<time_s>()};
    if (m.window_.duration() <= 0) {
      fail(error_code::invalid_argument, "grid window is empty");
    }
    m.label_ = doc.value("label", "");
    for (auto const& feat : doc.at("features")) {
      auto const& p = feat.at("properties");
      cell_stat c;
      c.row_ = p.at("row").get<std::uint32_t>();
      c.col_ = p.at("col").get<std::uint32_t>();
      c.stop_count_ = p.at("stop_count").get<std::uint32_t>();
      c.visit_count_ = p.at("visit_count").get<std::uint64_t>();
      if (c.stop_count_ == 0U) {
        fail(error_code::invalid_argument, "grid cell without stops");
      }
      c.avg_frequency_ =
          rational{static_cast<std::int64_t>(c.visit_count_) * 3600,
                   static_cast<std::int64_t>(c.stop_count_) *
                       m.window_.duration()};
      m.cells_.emplace(cell_key{c.row_, c.col_}, c);
    }
    return m;
  } catch (json::exception const& e) {
    fail(error_code::invalid_argument,
         std::string{"not a grid document: "} + e.what());
  }
}

}  // namespace gtfs2stn

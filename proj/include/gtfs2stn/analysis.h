#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gtfs2stn/geo.h"
#include "gtfs2stn/gtfs/feed.h"

namespace gtfs2stn {

// Reduced fraction with positive denominator.
struct rational {
  rational() = default;
  rational(std::int64_t num, std::int64_t den);

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(rational const&, rational const&) = default;
  friend rational operator-(rational const& a, rational const& b);
  friend rational operator*(rational const& a, rational const& b);
  friend rational operator-(rational const& a) { return {-a.num_, a.den_}; }

  std::int64_t num_{0}, den_{1};
};

struct grid_spec {
  friend bool operator==(grid_spec const&, grid_spec const&) = default;

  // Half-open cells: [min + k*size, min + (k+1)*size) on both axes.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> cell_of(
      geo_point) const;

  double min_lat_{0.0}, min_lon_{0.0}, cell_size_deg_{0.0};
  std::uint32_t n_rows_{0U}, n_cols_{0U};
};

// Smallest grid anchored at the south-west-most stop coordinates that
// covers every stop of the feed.
grid_spec grid_covering(feed const&, double cell_size_deg);

struct time_window {
  friend bool operator==(time_window const&, time_window const&) = default;
  time_s duration() const { return end_ - start_; }
  time_s start_{0}, end_{0};
};

using cell_key = std::pair<std::uint32_t, std::uint32_t>;  // (row, col)

struct cell_stat {
  friend bool operator==(cell_stat const&, cell_stat const&) = default;
  std::uint32_t row_{0U}, col_{0U};
  std::uint32_t stop_count_{0U};
  std::uint64_t visit_count_{0U};
  // visits per stop per hour: visit_count / (stop_count * window hours)
  rational avg_frequency_;
};

struct grid_frequency_map {
  grid_spec spec_;
  time_window window_;
  std::string label_;
  std::map<cell_key, cell_stat> cells_;  // only cells holding a stop
};

struct grid_difference {
  grid_spec spec_;
  std::map<cell_key, rational> cells_;  // b - a
  std::vector<std::string> warnings_;
};

// Arrivals in [start, end) per stop on trips of the selected services
// (frequency templates expanded). Every stop of the feed is present.
std::map<std::string, std::uint64_t> stop_visit_counts(
    feed const&, std::set<std::string> const& services, time_window);

grid_frequency_map grid_frequency(feed const&,
                                  std::set<std::string> const& services,
                                  grid_spec const&, time_window,
                                  std::string label = {});

grid_difference grid_diff(grid_frequency_map const& a,
                          grid_frequency_map const& b);

std::string grid_geojson(grid_frequency_map const&);
std::string grid_diff_geojson(grid_difference const&);
std::string grid_table(grid_frequency_map const&);
std::string grid_diff_table(grid_difference const&);

// Reads back the output of grid_geojson.
grid_frequency_map parse_grid_geojson(std::string_view);

}  // namespace gtfs2stn

#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gtfs2stn/analysis.h"
#include "gtfs2stn/gtfs/feed.h"
#include "gtfs2stn/network.h"
#include "gtfs2stn/router.h"

// Request parsing and result documents shared by the CLI and the HTTP
// service, so both surfaces render identical bytes for identical requests.
namespace gtfs2stn::gateway {

struct isochrone_request {
  std::vector<query_endpoint> endpoints_;
  direction dir_{direction::forward};
  time_s anchor_{0};
  time_s cutoff_{0};
  std::optional<std::vector<time_s>> bands_;  // default_bands(cutoff) if unset
};

isochrone_result run_isochrone(network const&, isochrone_request const&);

struct profile_request {
  query_endpoint origin_, destination_;
  time_window window_;
  time_s step_{600};
};

journey_profile run_profile(network const&, profile_request const&);

struct grid_request {
  std::set<std::string> services_;  // all feed services when empty
  double cell_deg_{0.01};
  time_window window_;
  std::string label_;
};

grid_frequency_map run_grid(feed const&, grid_request const&);

// "06:00-22:00" (either side HH:MM or HH:MM:SS); start <= end.
time_window parse_window(std::string_view);

// "600", "600s", "10m", "1h".
time_s parse_duration(std::string_view);

// Comma-separated list, blanks dropped.
std::vector<std::string> split_list(std::string_view);

// Comma-separated minutes ("20,40,60") to ascending seconds.
std::vector<time_s> parse_minute_list(std::string_view);

// Map layers of the loaded feed.
std::string stops_geojson(feed const&);
std::string shapes_geojson(feed const&);

}  // namespace gtfs2stn::gateway

#pragma once

#include <string>

#include "gtfs2stn/network.h"
#include "gtfs2stn/router.h"

namespace gtfs2stn {

// FeatureCollection: one MultiPolygon feature per non-empty band
// (ascending threshold), then one Point feature per reached stop. The query
// is echoed in a top-level "parameters" member.
std::string isochrone_geojson(network const&, isochrone_result const&);

// stop_id,travel_time_s
std::string isochrone_table(network const&, isochrone_result const&);

// departure_s,total_s,walk_s,wait_s,vehicle_s,reachable
std::string profile_table(journey_profile const&);

std::string profile_json(network const&, journey_profile const&);

}  // namespace gtfs2stn

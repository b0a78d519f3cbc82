#include "gtfs2stn/result_io.h"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace gtfs2stn {

namespace {

using json = nlohmann::json;

double round7(double const v) { return std::round(v * 1e7) / 1e7; }

json ring_coordinates(local_projection const& proj, planar_ring const& ring) {
  auto out = json::array();
  for (auto const& p : ring) {
    auto const g = proj.inverse(p);
    out.push_back({round7(g.lon_), round7(g.lat_)});
  }
  return out;
}

json endpoint_json(query_endpoint const& e) {
  if (auto const* s = std::get_if<stop_ref>(&e)) {
    return {{"stop_id", s->id_}};
  }
  auto const& p = std::get<geo_point>(e);
  return {{"lat", p.lat_}, {"lon", p.lon_}};
}

std::string stop_name(network const& net, stop_idx const s) {
  return s == kNone ? std::string{} : net.stops_[s].id_;
}

}  // namespace

std::string isochrone_geojson(network const& net, isochrone_result const& r) {
  auto const proj = local_projection{net};
  auto features = json::array();
  auto bands = json::array();
  for (auto const& band : r.bands_) {
    bands.push_back(band.threshold_);
    if (band.area_.empty()) {
      continue;
    }
    auto coords = json::array();
    for (auto const& poly : band.area_) {
      auto rings = json::array();
      rings.push_back(ring_coordinates(proj, poly.outer_));
      for (auto const& h : poly.holes_) {
        rings.push_back(ring_coordinates(proj, h));
      }
      coords.push_back(std::move(rings));
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "MultiPolygon"}, {"coordinates", coords}}},
         {"properties",
          {{"kind", "band"},
           {"threshold_s", band.threshold_},
           {"stop_count", band.circles_.size()}}}});
  }
  for (auto const& [s, travel] : r.stop_times_) {
    auto const& stop = net.stops_[s];
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "Point"},
           {"coordinates", {stop.pos_.lon_, stop.pos_.lat_}}}},
         {"properties",
          {{"kind", "stop"},
           {"stop_id", stop.id_},
           {"stop_name", stop.name_},
           {"travel_time_s", travel}}}});
  }

  auto endpoints = json::array();
  for (auto const& e : r.endpoints_) {
    endpoints.push_back(endpoint_json(e));
  }
  return json{{"type", "FeatureCollection"},
              {"parameters",
               {{"direction",
                 r.dir_ == direction::forward ? "depart" : "arrive"},
                {"anchor_s", r.anchor_},
                {"cutoff_s", r.cutoff_},
                {"bands_s", bands},
                {"endpoints", endpoints}}},
              {"features", features}}
      .dump();
}

std::string isochrone_table(network const& net, isochrone_result const& r) {
  std::ostringstream out;
  out << "stop_id,travel_time_s\n";
  for (auto const& [s, travel] : r.stop_times_) {
    out << net.stops_[s].id_ << ',' << travel << '\n';
  }
  return out.str();
}

std::string profile_table(journey_profile const& p) {
  std::ostringstream out;
  out << "departure_s,total_s,walk_s,wait_s,vehicle_s,reachable\n";
  for (auto const& s : p.samples_) {
    out << s.departure_ << ',';
    if (s.journey_.has_value()) {
      auto const& j = *s.journey_;
      out << j.total_ << ',' << j.walk_ << ',' << j.wait_ << ','
          << j.vehicle_ << ",1\n";
    } else {
      out << ",,,,0\n";
    }
  }
  return out.str();
}

std::string profile_json(network const& net, journey_profile const& p) {
  auto samples = json::array();
  for (auto const& s : p.samples_) {
    if (!s.journey_.has_value()) {
      samples.push_back({{"departure_s", s.departure_}, {"reachable", false}});
      continue;
    }
    auto const& j = *s.journey_;
    auto legs = json::array();
    for (auto const& leg : j.legs_) {
      auto l = json{{"kind", to_string(leg.kind_)},
                    {"from_stop", stop_name(net, leg.from_stop_)},
                    {"to_stop", stop_name(net, leg.to_stop_)},
                    {"start_s", leg.start_},
                    {"end_s", leg.end_}};
      if (leg.trip_ != kNoTrip) {
        l["trip_id"] = net.trip_ids_[leg.trip_];
      }
      legs.push_back(std::move(l));
    }
    samples.push_back({{"departure_s", s.departure_},
                       {"reachable", true},
                       {"total_s", j.total_},
                       {"walk_s", j.walk_},
                       {"wait_s", j.wait_},
                       {"vehicle_s", j.vehicle_},
                       {"legs", std::move(legs)}});
  }
  return json{{"origin", endpoint_json(p.origin_)},
              {"destination", endpoint_json(p.destination_)},
              {"window_start_s", p.window_start_},
              {"window_end_s", p.window_end_},
              {"step_s", p.step_},
              {"samples", std::move(samples)}}
      .dump();
}

}  // namespace gtfs2stn

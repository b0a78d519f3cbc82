#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gtfs2stn/geo.h"
#include "gtfs2stn/network.h"

namespace gtfs2stn {

struct stop_ref {
  friend bool operator==(stop_ref const&, stop_ref const&) = default;
  std::string id_;
};

using query_endpoint = std::variant<stop_ref, geo_point>;

// "lat,lon" becomes a coordinate, anything else a stop id.
query_endpoint parse_endpoint(std::string_view);
std::string to_string(query_endpoint const&);

enum class direction : std::uint8_t {
  forward,  // depart at anchor from the origins
  reverse  // arrive by anchor at the destinations
};

// Virtual origin (forward) or destination (reverse) attached to every
// endpoint. Stop endpoints attach to the stop's events at the anchor;
// coordinate endpoints attach by walking to every stop in range.
struct hyper_node {
  direction dir_{direction::forward};
  std::vector<query_endpoint> endpoints_;
  time_s anchor_{0};
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// Result of one search. Forward: earliest arrival per stop. Reverse: latest
// departure per stop from which the destinations are still reached in time.
struct arrival_labels {
  bool reached(stop_idx const s) const { return stop_label_[s].has_value(); }

  direction dir_{direction::forward};
  time_s anchor_{0};

  std::vector<std::optional<time_s>> stop_label_;
  // Node holding the stop's label; kNone when the label comes straight
  // from the hyper node (the stop itself is an endpoint or in walking range).
  std::vector<node_idx> stop_node_;
  // Access walk of the attachment that labels the stop directly.
  std::vector<time_s> stop_seed_walk_;

  // Per node: the link through which it was first reached (kNone for
  // unreached or seed nodes) and the access walk of seed nodes (-1 if not
  // a seed).
  std::vector<std::uint32_t> pred_link_;
  std::vector<time_s> seed_walk_;
  std::vector<bool> node_reached_;
};

struct search_options {
  // Nodes beyond this time (before it, in reverse) are not expanded.
  std::optional<time_s> limit_;
};

arrival_labels earliest_arrival(network const&, hyper_node const& origin,
                                search_options const& = {});
arrival_labels latest_departure(network const&, hyper_node const& destination,
                                search_options const& = {});

// Link indices from the attachment node to the node labelling target, in
// time order (for reverse labels: from target toward the destination).
std::vector<std::uint32_t> reconstruct_path(network const&,
                                            arrival_labels const&,
                                            stop_idx target);

enum class leg_kind : std::uint8_t { walk, wait, vehicle };

std::string_view to_string(leg_kind);

struct journey_leg {
  friend bool operator==(journey_leg const&, journey_leg const&) = default;
  leg_kind kind_{leg_kind::wait};
  // kNone marks the coordinate endpoint of an access/egress walk.
  stop_idx from_stop_{kNone}, to_stop_{kNone};
  time_s start_{0}, end_{0};
  trip_idx trip_{kNoTrip};
};

struct journey_breakdown {
  friend bool operator==(journey_breakdown const&,
                         journey_breakdown const&) = default;
  time_s total_{0}, walk_{0}, wait_{0}, vehicle_{0};
  std::vector<journey_leg> legs_;
};

// Best journey to any of the destinations given forward labels; nullopt if
// none is reached.
std::optional<journey_breakdown> decompose_journey(
    network const&, arrival_labels const&,
    std::span<query_endpoint const> destinations);

struct profile_sample {
  time_s departure_{0};
  std::optional<journey_breakdown> journey_;
};

struct journey_profile {
  query_endpoint origin_, destination_;
  time_s window_start_{0}, window_end_{0}, step_{0};
  std::vector<profile_sample> samples_;
};

journey_profile compute_journey_profile(network const&,
                                        query_endpoint const& origin,
                                        query_endpoint const& destination,
                                        time_s window_start, time_s window_end,
                                        time_s step);

struct circle {
  stop_idx stop_{0U};
  double radius_m_{0.0};
};

// Planar polygons in meters, local equirectangular projection about the
// network's stop centroid. Rings are closed and counter-clockwise.
struct planar_point {
  double x_{0.0}, y_{0.0};
};
using planar_ring = std::vector<planar_point>;
struct planar_polygon {
  planar_ring outer_;
  std::vector<planar_ring> holes_;
};
using planar_multi_polygon = std::vector<planar_polygon>;

struct isochrone_band {
  time_s threshold_{0};
  std::vector<circle> circles_;
  planar_multi_polygon area_;
};

struct isochrone_result {
  direction dir_{direction::forward};
  std::vector<query_endpoint> endpoints_;
  time_s anchor_{0}, cutoff_{0};
  std::vector<std::pair<stop_idx, time_s>> stop_times_;
  std::vector<isochrone_band> bands_;
};

// Multiples of 20 minutes up to two hours that do not exceed cutoff, plus
// cutoff itself when it is not one of them.
std::vector<time_s> default_bands(time_s cutoff);

isochrone_result isochrone(network const&, hyper_node const&, time_s cutoff,
                           std::vector<time_s> bands);

// Projection used for band polygons.
struct local_projection {
  explicit local_projection(network const&);
  planar_point forward(geo_point) const;
  geo_point inverse(planar_point) const;

  geo_point origin_;
  double cos_lat_;
};

double area_m2(planar_multi_polygon const&);
// Area of a minus b.
double difference_area_m2(planar_multi_polygon const& a,
                          planar_multi_polygon const& b);

}  // namespace gtfs2stn

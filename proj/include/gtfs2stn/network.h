#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gtfs2stn/geo.h"
#include "gtfs2stn/gtfs/feed.h"
#include "gtfs2stn/gtfs/time.h"

namespace gtfs2stn {

using node_idx = std::uint32_t;
using stop_idx = std::uint32_t;
using trip_idx = std::uint32_t;

constexpr trip_idx kNoTrip = std::numeric_limits<trip_idx>::max();

enum class link_kind : std::uint8_t { waiting = 0U, transit = 1U, walking = 2U };

std::string_view to_string(link_kind);

struct build_config {
  void check() const;

  std::set<std::string> service_ids_;
  double max_walk_m_{402.336};  // 0.25 mi
  double walk_speed_mps_{1.34};
  time_s day_horizon_s_{kMaxServiceTime};
};

// Integer walking time for a distance, rounded up so that arrival never
// precedes departure.
time_s walk_time_s(double distance_m, double walk_speed_mps);

struct event_node {
  friend bool operator==(event_node const&, event_node const&) = default;
  stop_idx stop_{0U};
  time_s time_{0};
};

struct link {
  friend bool operator==(link const&, link const&) = default;
  node_idx from_{0U}, to_{0U};
  link_kind kind_{link_kind::waiting};
  time_s duration_{0};
  // Walking links: the pure walking part of duration_; the rest is spent
  // waiting at the target stop for its next event. Zero otherwise.
  time_s walk_{0};
  trip_idx trip_{kNoTrip};
};

struct network_stop {
  friend bool operator==(network_stop const&, network_stop const&) = default;
  std::string id_, name_;
  geo_point pos_;
};

// Time-expanded graph. Nodes are sorted by (stop, time), so the events of
// one stop form a contiguous, strictly time-ordered range. Forward links are
// stored in CSR form grouped by source node; the reverse index lists, for
// each node, the forward link indices that end there.
struct network {
  std::span<link const> outgoing(node_idx) const;
  auto incoming(node_idx const n) const {
    return std::span{in_links_}.subspan(in_offsets_[n],
                                        in_offsets_[n + 1U] - in_offsets_[n]);
  }

  std::span<event_node const> stop_events(stop_idx) const;
  node_idx first_node_of(stop_idx const s) const { return stop_offsets_[s]; }

  std::optional<node_idx> first_node_at_or_after(stop_idx, time_s) const;
  std::optional<node_idx> last_node_at_or_before(stop_idx, time_s) const;

  std::optional<stop_idx> find_stop(std::string_view id) const;

  // Stops with haversine distance <= radius_m from p, ascending by index.
  std::vector<std::pair<stop_idx, double>> stops_near(geo_point p,
                                                      double radius_m) const;

  std::array<std::size_t, 3> link_counts() const;

  // Rebuilds offsets, reverse index and lookups from stops_/nodes_/links_.
  void finalize();

  friend bool operator==(network const& a, network const& b) {
    return a.stops_ == b.stops_ && a.nodes_ == b.nodes_ &&
           a.links_ == b.links_ && a.trip_ids_ == b.trip_ids_ &&
           a.service_ids_ == b.service_ids_ &&
           a.max_walk_m_ == b.max_walk_m_ &&
           a.walk_speed_mps_ == b.walk_speed_mps_ &&
           a.day_horizon_s_ == b.day_horizon_s_;
  }

  std::vector<network_stop> stops_;
  std::vector<event_node> nodes_;
  std::vector<link> links_;  // sorted by (from, kind, to, trip)
  std::vector<std::string> trip_ids_;

  std::vector<std::string> service_ids_;
  double max_walk_m_{0.0};
  double walk_speed_mps_{0.0};
  time_s day_horizon_s_{0};

  // derived by finalize()
  std::vector<std::uint32_t> stop_offsets_;
  std::vector<std::uint32_t> out_offsets_;
  std::vector<std::uint32_t> in_offsets_;
  std::vector<std::uint32_t> in_links_;
  std::unordered_map<std::string, stop_idx> stop_lookup_;
};

struct build_hooks {
  // Called with a fraction in [0, 1]; returning false cancels the build.
  std::function<bool(double)> progress_;
};

struct build_stats {
  std::size_t selected_trips_{0U};
  std::size_t skipped_segments_{0U};  // negative run times
};

network build_network(feed const&, build_config const&,
                      build_hooks const& = {}, build_stats* = nullptr);

// Versioned little-endian binary image with a trailing CRC-32.
std::string serialize_network(network const&);
network deserialize_network(std::string_view bytes);

constexpr std::uint8_t kNetworkFormatVersion = 1U;

// GeoJSON layers for external 3-D inspection: event nodes as points with a
// time property, links as two-point lines with a kind property.
std::string network_nodes_geojson(network const&);
std::string network_links_geojson(network const&);

}  // namespace gtfs2stn

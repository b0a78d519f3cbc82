#include "oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gtfs2stn::testing {

double chord_distance_m(double const lat1, double const lon1, double const lat2,
                        double const lon2) {
  auto const unit = [](double const lat, double const lon) {
    auto const phi = lat * std::numbers::pi / 180.0;
    auto const lambda = lon * std::numbers::pi / 180.0;
    return std::tuple{std::cos(phi) * std::cos(lambda),
                      std::cos(phi) * std::sin(lambda), std::sin(phi)};
  };
  auto const [x1, y1, z1] = unit(lat1, lon1);
  auto const [x2, y2, z2] = unit(lat2, lon2);
  auto const chord = std::sqrt((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2) +
                               (z1 - z2) * (z1 - z2));
  return 2.0 * 6'371'000.0 * std::asin(std::min(1.0, chord / 2.0));
}

std::set<std::pair<std::uint32_t, std::uint32_t>> brute_force_pairs(
    std::vector<geo_point> const& pts, double const max_m) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (auto i = 0U; i != pts.size(); ++i) {
    for (auto j = i + 1U; j < pts.size(); ++j) {
      auto const d = chord_distance_m(pts[i].lat_, pts[i].lon_, pts[j].lat_,
                                      pts[j].lon_);
      if (d > 0.0 && d <= max_m) {
        out.emplace(i, j);
      }
    }
  }
  return out;
}

namespace {

std::vector<node_idx> time_order(network const& net) {
  std::vector<node_idx> order(net.nodes_.size());
  std::iota(begin(order), end(order), 0U);
  std::sort(begin(order), end(order), [&](node_idx const a, node_idx const b) {
    return std::tie(net.nodes_[a].time_, a) < std::tie(net.nodes_[b].time_, b);
  });
  return order;
}

}  // namespace

std::vector<std::optional<time_s>> dag_earliest_arrival(network const& net,
                                                        stop_idx const origin,
                                                        time_s const anchor) {
  std::vector<bool> reach(net.nodes_.size(), false);
  for (auto n = net.stop_offsets_[origin]; n != net.stop_offsets_[origin + 1U];
       ++n) {
    if (net.nodes_[n].time_ >= anchor) {
      reach[n] = true;
      break;
    }
  }
  for (auto const n : time_order(net)) {
    if (!reach[n]) {
      continue;
    }
    for (auto const& l : net.links_) {
      if (l.from_ == n) {
        reach[l.to_] = true;
      }
    }
  }
  std::vector<std::optional<time_s>> label(net.stops_.size());
  label[origin] = anchor;
  for (auto n = 0U; n != net.nodes_.size(); ++n) {
    if (!reach[n]) {
      continue;
    }
    auto& l = label[net.nodes_[n].stop_];
    if (!l.has_value() || net.nodes_[n].time_ < *l) {
      l = net.nodes_[n].time_;
    }
  }
  return label;
}

std::vector<std::optional<time_s>> dag_latest_departure(network const& net,
                                                        stop_idx const dest,
                                                        time_s const deadline) {
  std::vector<bool> reach(net.nodes_.size(), false);
  for (auto n = net.stop_offsets_[dest + 1U]; n-- != net.stop_offsets_[dest];) {
    if (net.nodes_[n].time_ <= deadline) {
      reach[n] = true;
      break;
    }
  }
  auto order = time_order(net);
  std::reverse(begin(order), end(order));
  for (auto const n : order) {
    if (!reach[n]) {
      continue;
    }
    for (auto const& l : net.links_) {
      if (l.to_ == n) {
        reach[l.from_] = true;
      }
    }
  }
  std::vector<std::optional<time_s>> label(net.stops_.size());
  label[dest] = deadline;
  for (auto n = 0U; n != net.nodes_.size(); ++n) {
    if (!reach[n]) {
      continue;
    }
    auto& l = label[net.nodes_[n].stop_];
    if (!l.has_value() || net.nodes_[n].time_ > *l) {
      l = net.nodes_[n].time_;
    }
  }
  return label;
}

namespace {

void dfs(network const& net, node_idx const n, stop_idx const target,
         std::vector<link_kind>& kinds, enumerated_path& best) {
  auto const& node = net.nodes_[n];
  if (node.stop_ == target) {
    if (!best.arrival_.has_value() || node.time_ < *best.arrival_ ||
        (node.time_ == *best.arrival_ && kinds.size() < best.kinds_.size())) {
      best.arrival_ = node.time_;
      best.kinds_ = kinds;
    }
  }
  for (auto const& l : net.links_) {
    if (l.from_ != n) {
      continue;
    }
    kinds.push_back(l.kind_);
    dfs(net, l.to_, target, kinds, best);
    kinds.pop_back();
  }
}

}  // namespace

enumerated_path enumerate_paths(network const& net, stop_idx const origin,
                                time_s const anchor, stop_idx const target) {
  enumerated_path best;
  if (origin == target) {
    best.arrival_ = anchor;
    return best;
  }
  for (auto n = net.stop_offsets_[origin]; n != net.stop_offsets_[origin + 1U];
       ++n) {
    if (net.nodes_[n].time_ >= anchor) {
      std::vector<link_kind> kinds;
      dfs(net, n, target, kinds, best);
      break;
    }
  }
  return best;
}

}  // namespace gtfs2stn::testing

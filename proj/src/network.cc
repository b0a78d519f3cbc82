#include "gtfs2stn/network.h"

#include <algorithm>
#include <cmath>

#include "gtfs2stn/error.h"

namespace gtfs2stn {

std::string_view to_string(link_kind const k) {
  switch (k) {
    case link_kind::waiting: return "waiting";
    case link_kind::transit: return "transit";
    case link_kind::walking: return "walking";
  }
  return "?";
}

void build_config::check() const {
  if (!(max_walk_m_ > 0.0) || !std::isfinite(max_walk_m_)) {
    fail(error_code::invalid_argument, "max walk distance must be > 0");
  }
  if (!(walk_speed_mps_ > 0.0) || !std::isfinite(walk_speed_mps_)) {
    fail(error_code::invalid_argument, "walk speed must be > 0");
  }
  if (day_horizon_s_ <= 0) {
    fail(error_code::invalid_argument, "day horizon must be > 0");
  }
}

time_s walk_time_s(double const distance_m, double const walk_speed_mps) {
  return static_cast<time_s>(std::ceil(distance_m / walk_speed_mps));
}

std::span<link const> network::outgoing(node_idx const n) const {
  return std::span{links_}.subspan(out_offsets_[n],
                                   out_offsets_[n + 1U] - out_offsets_[n]);
}

std::span<event_node const> network::stop_events(stop_idx const s) const {
  return std::span{nodes_}.subspan(stop_offsets_[s],
                                   stop_offsets_[s + 1U] - stop_offsets_[s]);
}

std::optional<node_idx> network::first_node_at_or_after(stop_idx const s,
                                                        time_s const t) const {
  auto const events = stop_events(s);
  auto const it = std::lower_bound(
      begin(events), end(events), t,
      [](event_node const& e, time_s const x) { return e.time_ < x; });
  if (it == end(events)) {
    return std::nullopt;
  }
  return static_cast<node_idx>(stop_offsets_[s] + (it - begin(events)));
}

std::optional<node_idx> network::last_node_at_or_before(stop_idx const s,
                                                        time_s const t) const {
  auto const events = stop_events(s);
  auto const it = std::upper_bound(
      begin(events), end(events), t,
      [](time_s const x, event_node const& e) { return x < e.time_; });
  if (it == begin(events)) {
    return std::nullopt;
  }
  return static_cast<node_idx>(stop_offsets_[s] + (it - begin(events)) - 1);
}

std::optional<stop_idx> network::find_stop(std::string_view const id) const {
  auto const it = stop_lookup_.find(std::string{id});
  return it == end(stop_lookup_) ? std::nullopt : std::optional{it->second};
}

std::vector<std::pair<stop_idx, double>> network::stops_near(
    geo_point const p, double const radius_m) const {
  std::vector<std::pair<stop_idx, double>> out;
  for (auto s = stop_idx{0U}; s != stops_.size(); ++s) {
    if (auto const d = haversine_m(p, stops_[s].pos_); d <= radius_m) {
      out.emplace_back(s, d);
    }
  }
  return out;
}

std::array<std::size_t, 3> network::link_counts() const {
  std::array<std::size_t, 3> counts{};
  for (auto const& l : links_) {
    ++counts[static_cast<std::size_t>(l.kind_)];
  }
  return counts;
}

void network::finalize() {
  stop_lookup_.clear();
  for (auto s = stop_idx{0U}; s != stops_.size(); ++s) {
    stop_lookup_.emplace(stops_[s].id_, s);
  }

  stop_offsets_.assign(stops_.size() + 1U, 0U);
  for (auto const& n : nodes_) {
    ++stop_offsets_[n.stop_ + 1U];
  }
  for (auto i = std::size_t{1U}; i < stop_offsets_.size(); ++i) {
    stop_offsets_[i] += stop_offsets_[i - 1U];
  }

  out_offsets_.assign(nodes_.size() + 1U, 0U);
  in_offsets_.assign(nodes_.size() + 1U, 0U);
  for (auto const& l : links_) {
    ++out_offsets_[l.from_ + 1U];
    ++in_offsets_[l.to_ + 1U];
  }
  for (auto i = std::size_t{1U}; i < out_offsets_.size(); ++i) {
    out_offsets_[i] += out_offsets_[i - 1U];
    in_offsets_[i] += in_offsets_[i - 1U];
  }

  in_links_.resize(links_.size());
  auto fill = std::vector<std::uint32_t>(begin(in_offsets_),
                                         end(in_offsets_) - 1);
  for (auto i = 0U; i != links_.size(); ++i) {
    in_links_[fill[links_[i].to_]++] = i;
  }
}

}  // namespace gtfs2stn

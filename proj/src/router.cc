#include "gtfs2stn/router.h"

#include <algorithm>
#include <charconv>
#include <queue>

#include "gtfs2stn/error.h"

namespace gtfs2stn {

query_endpoint parse_endpoint(std::string_view const s) {
  auto const comma = s.find(',');
  if (comma != std::string_view::npos &&
      s.find(',', comma + 1U) == std::string_view::npos) {
    auto const parse = [](std::string_view x, double& out) {
      while (!x.empty() && x.front() == ' ') {
        x.remove_prefix(1);
      }
      auto const [ptr, ec] = std::from_chars(x.data(), x.data() + x.size(), out);
      return ec == std::errc{} && ptr == x.data() + x.size();
    };
    auto p = geo_point{};
    if (parse(s.substr(0, comma), p.lat_) &&
        parse(s.substr(comma + 1U), p.lon_)) {
      return p;
    }
  }
  return stop_ref{std::string{s}};
}

std::string to_string(query_endpoint const& e) {
  if (auto const* s = std::get_if<stop_ref>(&e)) {
    return s->id_;
  }
  auto const& p = std::get<geo_point>(e);
  char buf[64];
  auto ptr = std::to_chars(std::begin(buf), std::end(buf), p.lat_).ptr;
  *ptr++ = ',';
  ptr = std::to_chars(ptr, std::end(buf), p.lon_).ptr;
  return std::string(buf, ptr);
}

std::string_view to_string(leg_kind const k) {
  switch (k) {
    case leg_kind::walk: return "walk";
    case leg_kind::wait: return "wait";
    case leg_kind::vehicle: return "vehicle";
  }
  return "?";
}

namespace {

struct attachment {
  stop_idx stop_;
  time_s time_;
  time_s walk_;
};

// Where a hyper node touches the network. Forward times are
// anchor + walk, reverse times anchor - walk.
std::vector<attachment> attachments(network const& net, hyper_node const& h) {
  if (h.endpoints_.empty()) {
    fail(error_code::invalid_argument, "query needs at least one endpoint");
  }
  auto const sign = h.dir_ == direction::forward ? 1 : -1;
  std::vector<attachment> out;
  for (auto const& ep : h.endpoints_) {
    if (auto const* ref = std::get_if<stop_ref>(&ep)) {
      auto const s = net.find_stop(ref->id_);
      if (!s.has_value()) {
        fail(error_code::no_such_stop, ref->id_);
      }
      out.push_back({*s, h.anchor_, 0});
      continue;
    }
    auto const& p = std::get<geo_point>(ep);
    if (!p.valid()) {
      fail(error_code::invalid_argument, "coordinate out of range");
    }
    for (auto const& [s, d] : net.stops_near(p, net.max_walk_m_)) {
      auto const w = walk_time_s(d, net.walk_speed_mps_);
      out.push_back({s, h.anchor_ + sign * w, w});
    }
  }
  if (out.empty()) {
    fail(h.dir_ == direction::forward ? error_code::origin_isolated
                                      : error_code::destination_isolated,
         "no stop within walking range of the query point");
  }
  return out;
}

arrival_labels search(network const& net, hyper_node const& h,
                      search_options const& opt) {
  auto const fwd = h.dir_ == direction::forward;
  auto const better = [fwd](time_s const a, time_s const b) {
    return fwd ? a < b : a > b;
  };
  auto const within_limit = [&](time_s const t) {
    return !opt.limit_.has_value() || !better(*opt.limit_, t);
  };

  auto const n_stops = net.stops_.size();
  auto const n_nodes = net.nodes_.size();
  arrival_labels l;
  l.dir_ = h.dir_;
  l.anchor_ = h.anchor_;
  l.stop_label_.assign(n_stops, std::nullopt);
  l.stop_node_.assign(n_stops, kNone);
  l.stop_seed_walk_.assign(n_stops, 0);
  l.pred_link_.assign(n_nodes, kNone);
  l.seed_walk_.assign(n_nodes, -1);
  l.node_reached_.assign(n_nodes, false);

  using entry = std::pair<time_s, node_idx>;
  auto const cmp = [fwd](entry const& a, entry const& b) {
    // priority_queue pops the "largest": make that the earliest (forward) or
    // latest (reverse) time, ties to the smaller node index.
    if (a.first != b.first) {
      return fwd ? a.first > b.first : a.first < b.first;
    }
    return a.second > b.second;
  };
  std::priority_queue<entry, std::vector<entry>, decltype(cmp)> pq{cmp};

  for (auto const& a : attachments(net, h)) {
    auto& label = l.stop_label_[a.stop_];
    if (!label.has_value() || better(a.time_, *label) ||
        (a.time_ == *label && a.walk_ < l.stop_seed_walk_[a.stop_])) {
      label = a.time_;
      l.stop_seed_walk_[a.stop_] = a.walk_;
    }
    auto const n = fwd ? net.first_node_at_or_after(a.stop_, a.time_)
                       : net.last_node_at_or_before(a.stop_, a.time_);
    if (!n.has_value() || !within_limit(net.nodes_[*n].time_)) {
      continue;
    }
    if (!l.node_reached_[*n] || a.walk_ < l.seed_walk_[*n]) {
      l.node_reached_[*n] = true;
      l.seed_walk_[*n] = a.walk_;
      pq.emplace(net.nodes_[*n].time_, *n);
    }
  }

  std::vector<bool> settled(n_nodes, false);
  auto const relax = [&](node_idx const v, std::uint32_t const li) {
    if (l.node_reached_[v] || !within_limit(net.nodes_[v].time_)) {
      return;
    }
    l.node_reached_[v] = true;
    l.pred_link_[v] = li;
    pq.emplace(net.nodes_[v].time_, v);
  };
  while (!pq.empty()) {
    auto const [t, n] = pq.top();
    pq.pop();
    if (settled[n]) {
      continue;
    }
    settled[n] = true;
    if (fwd) {
      for (auto li = net.out_offsets_[n]; li != net.out_offsets_[n + 1U];
           ++li) {
        relax(net.links_[li].to_, li);
      }
    } else {
      for (auto const li : net.incoming(n)) {
        relax(net.links_[li].from_, li);
      }
    }
  }

  for (auto n = node_idx{0U}; n != n_nodes; ++n) {
    if (!l.node_reached_[n]) {
      continue;
    }
    auto const& node = net.nodes_[n];
    auto& label = l.stop_label_[node.stop_];
    if (!label.has_value() || better(node.time_, *label)) {
      label = node.time_;
      l.stop_node_[node.stop_] = n;
    }
  }
  return l;
}

}  // namespace

arrival_labels earliest_arrival(network const& net, hyper_node const& origin,
                                search_options const& opt) {
  if (origin.dir_ != direction::forward) {
    fail(error_code::invalid_argument, "earliest_arrival needs an origin node");
  }
  return search(net, origin, opt);
}

arrival_labels latest_departure(network const& net,
                                hyper_node const& destination,
                                search_options const& opt) {
  if (destination.dir_ != direction::reverse) {
    fail(error_code::invalid_argument,
         "latest_departure needs a destination node");
  }
  return search(net, destination, opt);
}

std::vector<std::uint32_t> reconstruct_path(network const& net,
                                            arrival_labels const& l,
                                            stop_idx const target) {
  if (target >= l.stop_label_.size() || !l.reached(target)) {
    fail(error_code::unreached,
         target < net.stops_.size() ? net.stops_[target].id_ : "?");
  }
  std::vector<std::uint32_t> path;
  auto n = l.stop_node_[target];
  if (n == kNone) {
    return path;
  }
  while (l.pred_link_[n] != kNone) {
    auto const li = l.pred_link_[n];
    path.push_back(li);
    n = l.dir_ == direction::forward ? net.links_[li].from_
                                     : net.links_[li].to_;
  }
  if (l.dir_ == direction::forward) {
    std::reverse(begin(path), end(path));
  }
  return path;
}

namespace {

void add_leg(std::vector<journey_leg>& legs, journey_leg const& leg) {
  if (leg.end_ == leg.start_ && leg.kind_ == leg_kind::wait) {
    return;
  }
  if (!legs.empty()) {
    auto& last = legs.back();
    auto const same_wait = last.kind_ == leg_kind::wait &&
                           leg.kind_ == leg_kind::wait &&
                           last.to_stop_ == leg.from_stop_;
    auto const same_trip = last.kind_ == leg_kind::vehicle &&
                           leg.kind_ == leg_kind::vehicle &&
                           last.trip_ == leg.trip_ &&
                           last.to_stop_ == leg.from_stop_;
    if ((same_wait || same_trip) && last.end_ == leg.start_) {
      last.end_ = leg.end_;
      last.to_stop_ = leg.to_stop_;
      return;
    }
  }
  legs.push_back(leg);
}

}  // namespace

std::optional<journey_breakdown> decompose_journey(
    network const& net, arrival_labels const& l,
    std::span<query_endpoint const> destinations) {
  if (l.dir_ != direction::forward) {
    fail(error_code::invalid_argument, "journeys decompose forward labels");
  }

  struct candidate {
    stop_idx stop_;
    time_s egress_;
  };
  std::vector<candidate> candidates;
  for (auto const& d : destinations) {
    if (auto const* ref = std::get_if<stop_ref>(&d)) {
      auto const s = net.find_stop(ref->id_);
      if (!s.has_value()) {
        fail(error_code::no_such_stop, ref->id_);
      }
      candidates.push_back({*s, 0});
    } else {
      for (auto const& [s, dist] :
           net.stops_near(std::get<geo_point>(d), net.max_walk_m_)) {
        candidates.push_back({s, walk_time_s(dist, net.walk_speed_mps_)});
      }
    }
  }

  std::optional<candidate> best;
  auto best_arrival = time_s{0};
  for (auto const& c : candidates) {
    if (!l.reached(c.stop_)) {
      continue;
    }
    auto const arrival = *l.stop_label_[c.stop_] + c.egress_;
    if (!best.has_value() || arrival < best_arrival ||
        (arrival == best_arrival &&
         std::tie(c.egress_, c.stop_) < std::tie(best->egress_, best->stop_))) {
      best = c;
      best_arrival = arrival;
    }
  }
  if (!best.has_value()) {
    return std::nullopt;
  }

  std::vector<journey_leg> legs;
  auto const s = best->stop_;
  auto const label = *l.stop_label_[s];
  if (l.stop_node_[s] == kNone) {
    auto const w = l.stop_seed_walk_[s];
    if (w > 0) {
      legs.push_back({leg_kind::walk, kNone, s, l.anchor_, l.anchor_ + w});
    }
  } else {
    auto const path = reconstruct_path(net, l, s);
    auto const n0 = path.empty() ? l.stop_node_[s] : net.links_[path[0]].from_;
    auto const stop0 = net.nodes_[n0].stop_;
    auto const w = l.seed_walk_[n0];
    if (w > 0) {
      legs.push_back({leg_kind::walk, kNone, stop0, l.anchor_, l.anchor_ + w});
    }
    add_leg(legs, {leg_kind::wait, stop0, stop0, l.anchor_ + w,
                   net.nodes_[n0].time_});
    for (auto const li : path) {
      auto const& lk = net.links_[li];
      auto const& from = net.nodes_[lk.from_];
      auto const& to = net.nodes_[lk.to_];
      switch (lk.kind_) {
        case link_kind::transit:
          add_leg(legs, {leg_kind::vehicle, from.stop_, to.stop_, from.time_,
                         to.time_, lk.trip_});
          break;
        case link_kind::waiting:
          add_leg(legs,
                  {leg_kind::wait, from.stop_, to.stop_, from.time_, to.time_});
          break;
        case link_kind::walking:
          add_leg(legs, {leg_kind::walk, from.stop_, to.stop_, from.time_,
                         from.time_ + lk.walk_});
          add_leg(legs, {leg_kind::wait, to.stop_, to.stop_,
                         from.time_ + lk.walk_, to.time_});
          break;
      }
    }
  }
  if (best->egress_ > 0) {
    legs.push_back(
        {leg_kind::walk, s, kNone, label, label + best->egress_});
  }

  journey_breakdown j;
  j.total_ = best_arrival - l.anchor_;
  for (auto const& leg : legs) {
    auto const d = leg.end_ - leg.start_;
    switch (leg.kind_) {
      case leg_kind::walk: j.walk_ += d; break;
      case leg_kind::wait: j.wait_ += d; break;
      case leg_kind::vehicle: j.vehicle_ += d; break;
    }
  }
  j.legs_ = std::move(legs);
  if (j.walk_ + j.wait_ + j.vehicle_ != j.total_) {
    fail(error_code::invalid_argument, "journey decomposition does not add up");
  }
  return j;
}

journey_profile compute_journey_profile(network const& net,
                                        query_endpoint const& origin,
                                        query_endpoint const& destination,
                                        time_s const window_start,
                                        time_s const window_end,
                                        time_s const step) {
  if (window_start > window_end) {
    fail(error_code::invalid_argument, "window start after window end");
  }
  if (step <= 0) {
    fail(error_code::invalid_argument, "profile step must be > 0");
  }
  journey_profile p;
  p.origin_ = origin;
  p.destination_ = destination;
  p.window_start_ = window_start;
  p.window_end_ = window_end;
  p.step_ = step;
  auto const dests = std::span{&destination, 1U};
  for (auto t = window_start; t <= window_end; t += step) {
    auto const labels = earliest_arrival(
        net, hyper_node{direction::forward, {origin}, t});
    p.samples_.push_back({t, decompose_journey(net, labels, dests)});
  }
  return p;
}

}  // namespace gtfs2stn

#include <algorithm>
#include <tuple>

#include "gtfs2stn/error.h"
#include "gtfs2stn/network.h"

namespace gtfs2stn {

namespace {

void report(build_hooks const& hooks, double const fraction) {
  if (hooks.progress_ && !hooks.progress_(fraction)) {
    fail(error_code::cancelled, "network build cancelled");
  }
}

}  // namespace

network build_network(feed const& input, build_config const& cfg,
                      build_hooks const& hooks, build_stats* stats) {
  cfg.check();
  report(hooks, 0.0);

  auto const f = expand_frequencies(input);
  auto const selected = trips_for_services(f, cfg.service_ids_);
  if (selected.empty()) {
    fail(error_code::empty_selection, "no trips run on the selected services");
  }
  report(hooks, 0.1);

  network net;
  net.service_ids_.assign(begin(cfg.service_ids_), end(cfg.service_ids_));
  net.max_walk_m_ = cfg.max_walk_m_;
  net.walk_speed_mps_ = cfg.walk_speed_mps_;
  net.day_horizon_s_ = cfg.day_horizon_s_;
  net.stops_.reserve(f.stops_.size());
  for (auto const& s : f.stops_) {
    net.stops_.push_back({s.id_, s.name_, {s.lat_, s.lon_}});
  }
  net.trip_ids_ = selected;

  // Event nodes: one per distinct (stop, time) among selected stop_times.
  auto const stop_of = [&](stop_time const& st) {
    auto const idx = f.stop_idx(st.stop_id_);
    if (!idx.has_value()) {
      fail(error_code::invalid_argument,
           "stop_time references unknown stop " + st.stop_id_);
    }
    return *idx;
  };
  std::vector<trip_idx> feed_trip(selected.size());
  for (auto t = 0U; t != selected.size(); ++t) {
    feed_trip[t] = *f.trip_idx(selected[t]);
    for (auto const& st : f.trip_stop_times(feed_trip[t])) {
      auto const s = stop_of(st);
      net.nodes_.push_back({s, st.arrival_});
      net.nodes_.push_back({s, st.departure_});
    }
  }
  std::sort(begin(net.nodes_), end(net.nodes_),
            [](event_node const& a, event_node const& b) {
              return std::tie(a.stop_, a.time_) < std::tie(b.stop_, b.time_);
            });
  net.nodes_.erase(std::unique(begin(net.nodes_), end(net.nodes_)),
                   end(net.nodes_));
  net.finalize();
  report(hooks, 0.3);

  auto const node_at = [&](stop_idx const s, time_s const t) {
    return *net.first_node_at_or_after(s, t);
  };

  std::size_t skipped = 0U;
  for (auto t = 0U; t != selected.size(); ++t) {
    auto const sts = f.trip_stop_times(feed_trip[t]);
    for (auto i = std::size_t{1U}; i < sts.size(); ++i) {
      auto const& a = sts[i - 1U];
      auto const& b = sts[i];
      auto const sa = stop_of(a), sb = stop_of(b);
      if (b.arrival_ < a.departure_ || sa == sb) {
        ++skipped;
        continue;
      }
      net.links_.push_back({node_at(sa, a.departure_), node_at(sb, b.arrival_),
                            link_kind::transit, b.arrival_ - a.departure_, 0,
                            t});
    }
  }
  report(hooks, 0.5);

  for (auto s = stop_idx{0U}; s != net.stops_.size(); ++s) {
    auto const first = net.first_node_of(s);
    auto const events = net.stop_events(s);
    for (auto i = std::size_t{1U}; i < events.size(); ++i) {
      auto const from = static_cast<node_idx>(first + i - 1U);
      net.links_.push_back({from, from + 1U, link_kind::waiting,
                            events[i].time_ - events[i - 1U].time_, 0,
                            kNoTrip});
    }
  }
  report(hooks, 0.6);

  std::vector<geo_point> positions;
  positions.reserve(net.stops_.size());
  for (auto const& s : net.stops_) {
    positions.push_back(s.pos_);
  }
  auto const index = spatial_index{
      positions, spatial_index::cell_size_for(cfg.max_walk_m_)};
  auto const pairs = walk_pairs(positions, index, cfg.max_walk_m_);
  auto done = std::size_t{0U};
  for (auto const& p : pairs) {
    auto const walk = walk_time_s(p.distance_m_, cfg.walk_speed_mps_);
    for (auto const& [from_stop, to_stop] :
         {std::pair{p.a_, p.b_}, std::pair{p.b_, p.a_}}) {
      auto const first = net.first_node_of(from_stop);
      auto const events = net.stop_events(from_stop);
      for (auto i = std::size_t{0U}; i != events.size(); ++i) {
        auto const earliest = events[i].time_ + walk;
        auto const target = net.first_node_at_or_after(to_stop, earliest);
        if (!target.has_value() ||
            net.nodes_[*target].time_ > cfg.day_horizon_s_) {
          // Later events at this stop only need later targets.
          break;
        }
        net.links_.push_back({static_cast<node_idx>(first + i), *target,
                              link_kind::walking,
                              net.nodes_[*target].time_ - events[i].time_,
                              walk, kNoTrip});
      }
    }
    if (++done % 1024U == 0U) {
      report(hooks, 0.6 + 0.3 * static_cast<double>(done) /
                              static_cast<double>(pairs.size()));
    }
  }

  std::sort(begin(net.links_), end(net.links_),
            [](link const& a, link const& b) {
              return std::tie(a.from_, a.kind_, a.to_, a.trip_) <
                     std::tie(b.from_, b.kind_, b.to_, b.trip_);
            });
  net.finalize();
  report(hooks, 1.0);

  if (stats != nullptr) {
    stats->selected_trips_ = selected.size();
    stats->skipped_segments_ = skipped;
  }
  return net;
}

}  // namespace gtfs2stn

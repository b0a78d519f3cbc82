#include "gtest/gtest.h"

#include <random>

#include "gtfs2stn/error.h"
#include "gtfs2stn/router.h"

#include "fixtures.h"
#include "oracle.h"

using namespace gtfs2stn;
using namespace gtfs2stn::testing;

namespace {

network build(table_files const& t) {
  auto const f = load(t);
  auto cfg = build_config{};
  cfg.service_ids_ = f.service_ids();
  return build_network(f, cfg);
}

error_code code_of(auto&& fn) {
  try {
    fn();
  } catch (error const& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return error_code::io;
}

arrival_labels ea(network const& n, stop_idx const s, time_s const t) {
  return earliest_arrival(
      n, hyper_node{direction::forward, {stop_ref{n.stops_[s].id_}}, t});
}

arrival_labels ld(network const& n, stop_idx const s, time_s const t) {
  return latest_departure(
      n, hyper_node{direction::reverse, {stop_ref{n.stops_[s].id_}}, t});
}

std::vector<time_s> anchors() {
  std::vector<time_s> out;
  for (auto t = 6 * 3600 + 45 * 60; t <= 9 * 3600 + 30 * 60; t += 11 * 60) {
    out.push_back(t);
  }
  return out;
}

void check_legs(journey_breakdown const& j, time_s const anchor) {
  ASSERT_EQ(j.total_, j.walk_ + j.wait_ + j.vehicle_);
  auto t = anchor;
  for (auto const& leg : j.legs_) {
    EXPECT_EQ(t, leg.start_);
    EXPECT_LE(leg.start_, leg.end_);
    t = leg.end_;
  }
  EXPECT_EQ(anchor + j.total_, t);
}

}  // namespace

TEST(router, endpoint_parsing) {
  EXPECT_EQ(query_endpoint{stop_ref{"A1"}}, parse_endpoint("A1"));
  EXPECT_EQ(query_endpoint{(geo_point{36.16, -86.78})},
            parse_endpoint("36.16,-86.78"));
  EXPECT_EQ(query_endpoint{(geo_point{36.16, -86.78})},
            parse_endpoint("36.16, -86.78"));
  EXPECT_EQ(query_endpoint{stop_ref{"1,2,3"}}, parse_endpoint("1,2,3"));
  EXPECT_EQ(query_endpoint{stop_ref{"a,b"}}, parse_endpoint("a,b"));
  EXPECT_EQ("36.16,-86.78", to_string(parse_endpoint("36.16,-86.78")));
}

TEST(router, earliest_arrival_matches_dag_oracle) {
  std::vector<network> nets{build(three_route_tables()),
                            build(single_trip_tables())};
  for (auto seed = 1U; seed != 6U; ++seed) {
    nets.push_back(build(random_three_route_tables(seed)));
  }
  for (auto const& n : nets) {
    for (auto o = stop_idx{0U}; o != n.stops_.size(); ++o) {
      for (auto const t : anchors()) {
        EXPECT_EQ(dag_earliest_arrival(n, o, t), ea(n, o, t).stop_label_);
        EXPECT_EQ(dag_latest_departure(n, o, t), ld(n, o, t).stop_label_);
      }
    }
  }
}

TEST(router, matches_path_enumeration) {
  auto const n = build(three_route_tables());
  for (auto o = stop_idx{0U}; o != n.stops_.size(); ++o) {
    for (auto d = stop_idx{0U}; d != n.stops_.size(); ++d) {
      if (o == d) {
        continue;
      }
      auto const l = ea(n, o, 7 * 3600);
      EXPECT_EQ(enumerate_paths(n, o, 7 * 3600, d).arrival_,
                l.stop_label_[d]);
    }
  }
}

TEST(router, example_walk_transfer) {
  // A1 08:00 -> A3 08:16, walk ~133 m to B1, R2 08:20 -> B3 08:34.
  auto const n = build(three_route_tables());
  auto const l = ea(n, *n.find_stop("A1"), 8 * 3600);
  EXPECT_EQ(8 * 3600 + 34 * 60, l.stop_label_[*n.find_stop("B3")]);
  auto const dest = std::vector<query_endpoint>{stop_ref{"B3"}};
  auto const j = decompose_journey(n, l, dest);
  ASSERT_TRUE(j.has_value());
  EXPECT_EQ(34 * 60, j->total_);
  EXPECT_EQ(walk_time_s(haversine_m({36.16, -86.78}, {36.1612, -86.78}), 1.34),
            j->walk_);
  EXPECT_EQ(8 * 60 + 7 * 60 + 6 * 60 + 7 * 60, j->vehicle_);
  check_legs(*j, 8 * 3600);
  // Dwells at A2 and B2 are waiting links.
  auto const kinds = [&] {
    std::vector<leg_kind> k;
    for (auto const& leg : j->legs_) {
      k.push_back(leg.kind_);
    }
    return k;
  }();
  using enum leg_kind;
  EXPECT_EQ((std::vector{vehicle, wait, vehicle, walk, wait, vehicle, wait,
                         vehicle}),
            kinds);
}

TEST(router, duality) {
  for (auto const& n : {build(three_route_tables()),
                        build(random_three_route_tables(42U))}) {
    for (auto o = stop_idx{0U}; o != n.stops_.size(); ++o) {
      for (auto d = stop_idx{0U}; d != n.stops_.size(); ++d) {
        for (auto const t : anchors()) {
          auto const a = ea(n, o, t).stop_label_[d];
          if (a.has_value()) {
            auto const back = ld(n, d, *a).stop_label_[o];
            ASSERT_TRUE(back.has_value());
            EXPECT_GE(*back, t);
          }
          auto const b = ld(n, d, t).stop_label_[o];
          if (b.has_value()) {
            auto const fwd = ea(n, o, *b).stop_label_[d];
            ASSERT_TRUE(fwd.has_value());
            EXPECT_LE(*fwd, t);
          }
        }
      }
    }
  }
}

TEST(router, labels_monotone_in_anchor) {
  auto const n = build(random_three_route_tables(5U));
  auto const ts = anchors();
  for (auto o = stop_idx{0U}; o != n.stops_.size(); ++o) {
    for (auto i = 1U; i < ts.size(); ++i) {
      auto const early = ea(n, o, ts[i - 1U]).stop_label_;
      auto const late = ea(n, o, ts[i]).stop_label_;
      for (auto s = 0U; s != early.size(); ++s) {
        if (late[s].has_value()) {
          ASSERT_TRUE(early[s].has_value());
          EXPECT_LE(*early[s], *late[s]);
        }
      }
    }
  }
}

TEST(router, bellman_condition_on_labels) {
  auto const n = build(three_route_tables());
  auto const l = ea(n, *n.find_stop("A1"), 7 * 3600);
  for (auto const& lk : n.links_) {
    if (l.node_reached_[lk.from_]) {
      EXPECT_TRUE(l.node_reached_[lk.to_]);
      EXPECT_LE(*l.stop_label_[n.nodes_[lk.to_].stop_], n.nodes_[lk.to_].time_);
    }
  }
}

TEST(router, paths_are_consistent) {
  auto const n = build(three_route_tables());
  auto const f = ea(n, *n.find_stop("A1"), 7 * 3600);
  auto const r = ld(n, *n.find_stop("C3"), 10 * 3600);
  for (auto s = stop_idx{0U}; s != n.stops_.size(); ++s) {
    for (auto const* l : {&f, &r}) {
      if (!l->reached(s)) {
        EXPECT_EQ(error_code::unreached,
                  code_of([&] { reconstruct_path(n, *l, s); }));
        continue;
      }
      auto const p = reconstruct_path(n, *l, s);
      for (auto i = 1U; i < p.size(); ++i) {
        EXPECT_EQ(n.links_[p[i - 1U]].to_, n.links_[p[i]].from_);
      }
      if (!p.empty()) {
        auto const end = l->dir_ == direction::forward ? n.links_[p.back()].to_
                                                       : n.links_[p.front()].from_;
        EXPECT_EQ(*l->stop_label_[s], n.nodes_[end].time_);
      }
    }
  }
}

TEST(router, coordinate_endpoints) {
  auto const n = build(three_route_tables());
  // Roughly 100 m south of A1.
  auto const p = geo_point{36.1591, -86.8};
  auto const w = walk_time_s(haversine_m(p, {36.16, -86.8}), 1.34);
  auto const t0 = 7 * 3600 - 120;
  auto const l = earliest_arrival(n, hyper_node{direction::forward, {p}, t0});
  EXPECT_EQ(t0 + w, l.stop_label_[*n.find_stop("A1")]);
  EXPECT_EQ(7 * 3600 + 8 * 60 + 60 + 7 * 60,
            l.stop_label_[*n.find_stop("A3")]);

  auto const dest = std::vector<query_endpoint>{geo_point{36.16, -86.781}};
  auto const j = decompose_journey(n, l, dest);
  ASSERT_TRUE(j.has_value());
  check_legs(*j, t0);
  EXPECT_EQ(leg_kind::walk, j->legs_.front().kind_);
  EXPECT_EQ(leg_kind::walk, j->legs_.back().kind_);
  EXPECT_EQ(kNone, j->legs_.front().from_stop_);
  EXPECT_EQ(kNone, j->legs_.back().to_stop_);
}

TEST(router, errors) {
  auto const n = build(three_route_tables());
  EXPECT_EQ(error_code::no_such_stop, code_of([&] {
              earliest_arrival(n, {direction::forward, {stop_ref{"ZZ"}}, 0});
            }));
  EXPECT_EQ(error_code::origin_isolated, code_of([&] {
              earliest_arrival(n,
                               {direction::forward, {geo_point{0.0, 0.0}}, 0});
            }));
  EXPECT_EQ(error_code::destination_isolated, code_of([&] {
              latest_departure(n,
                               {direction::reverse, {geo_point{0.0, 0.0}}, 0});
            }));
  EXPECT_EQ(error_code::invalid_argument, code_of([&] {
              earliest_arrival(n, {direction::reverse, {stop_ref{"A1"}}, 0});
            }));
  EXPECT_EQ(error_code::invalid_argument,
            code_of([&] { earliest_arrival(n, {direction::forward, {}, 0}); }));
}

TEST(router, origin_after_last_event_still_labels_itself) {
  auto const n = build(three_route_tables());
  auto const l = ea(n, *n.find_stop("A1"), 12 * 3600);
  auto count = 0;
  for (auto const& s : l.stop_label_) {
    count += s.has_value() ? 1 : 0;
  }
  EXPECT_EQ(1, count);
  EXPECT_EQ(12 * 3600, l.stop_label_[*n.find_stop("A1")]);
}

TEST(router, search_limit) {
  auto const n = build(three_route_tables());
  auto const l = earliest_arrival(
      n, {direction::forward, {stop_ref{"A1"}}, 7 * 3600}, {7 * 3600 + 600});
  EXPECT_FALSE(l.reached(*n.find_stop("A3")));
  EXPECT_TRUE(l.reached(*n.find_stop("A2")));
}

TEST(router, multiple_origins_take_the_best) {
  auto const n = build(three_route_tables());
  auto const both = earliest_arrival(
      n, {direction::forward, {stop_ref{"A1"}, stop_ref{"B1"}}, 7 * 3600});
  auto const a = ea(n, *n.find_stop("A1"), 7 * 3600);
  auto const b = ea(n, *n.find_stop("B1"), 7 * 3600);
  for (auto s = 0U; s != n.stops_.size(); ++s) {
    std::optional<time_s> expected = a.stop_label_[s];
    if (b.stop_label_[s].has_value() &&
        (!expected.has_value() || *b.stop_label_[s] < *expected)) {
      expected = b.stop_label_[s];
    }
    EXPECT_EQ(expected, both.stop_label_[s]);
  }
}

TEST(router, profile_samples_add_up_and_respect_fifo) {
  auto const n = build(three_route_tables());
  auto const p = compute_journey_profile(n, stop_ref{"A1"}, stop_ref{"C3"},
                                         6 * 3600, 10 * 3600, 300);
  EXPECT_EQ(49U, p.samples_.size());
  std::optional<time_s> prev;
  auto reachable = 0;
  for (auto const& s : p.samples_) {
    if (!s.journey_.has_value()) {
      continue;
    }
    ++reachable;
    check_legs(*s.journey_, s.departure_);
    auto const arrival = s.departure_ + s.journey_->total_;
    if (prev.has_value()) {
      EXPECT_LE(*prev, arrival);
    }
    prev = arrival;
  }
  EXPECT_GT(reachable, 0);
  EXPECT_FALSE(p.samples_.back().journey_.has_value());

  EXPECT_EQ(error_code::invalid_argument, code_of([&] {
              compute_journey_profile(n, stop_ref{"A1"}, stop_ref{"C3"}, 10, 0,
                                      60);
            }));
  EXPECT_EQ(error_code::invalid_argument, code_of([&] {
              compute_journey_profile(n, stop_ref{"A1"}, stop_ref{"C3"}, 0, 10,
                                      0);
            }));
}

TEST(router, random_decompositions_add_up) {
  auto const n = build(random_three_route_tables(9U));
  std::mt19937 rng{1U};
  std::uniform_int_distribution<stop_idx> stop{0U, static_cast<stop_idx>(n.stops_.size() - 1U)};
  std::uniform_int_distribution<time_s> time{6 * 3600, 10 * 3600};
  for (auto i = 0; i != 300; ++i) {
    auto const t = time(rng);
    auto const l = ea(n, stop(rng), t);
    auto const dest =
        std::vector<query_endpoint>{stop_ref{n.stops_[stop(rng)].id_}};
    if (auto const j = decompose_journey(n, l, dest); j.has_value()) {
      check_legs(*j, t);
    }
  }
}

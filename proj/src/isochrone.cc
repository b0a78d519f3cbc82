#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>

#include "gtfs2stn/error.h"
#include "gtfs2stn/router.h"

namespace bg = boost::geometry;

namespace gtfs2stn {

namespace {

using bg_point = bg::model::d2::point_xy<double>;
using bg_polygon = bg::model::polygon<bg_point, false, true>;
using bg_multi = bg::model::multi_polygon<bg_polygon>;

constexpr auto kCircleSegments = 32U;

constexpr double to_rad(double const deg) {
  return deg * std::numbers::pi / 180.0;
}

bg_multi circle_polygon(planar_point const c, double const r) {
  bg_polygon poly;
  for (auto k = 0U; k != kCircleSegments; ++k) {
    auto const a = 2.0 * std::numbers::pi * k / kCircleSegments;
    bg::append(poly.outer(), bg_point{c.x_ + r * std::cos(a),
                                      c.y_ + r * std::sin(a)});
  }
  bg::append(poly.outer(), poly.outer().front());
  return bg_multi{poly};
}

// Pairwise merge tree: unions stay small until the final levels.
bg_multi union_all(std::vector<bg_multi> parts) {
  if (parts.empty()) {
    return {};
  }
  while (parts.size() > 1U) {
    std::vector<bg_multi> next;
    next.reserve((parts.size() + 1U) / 2U);
    for (auto i = std::size_t{0U}; i + 1U < parts.size(); i += 2U) {
      bg_multi u;
      bg::union_(parts[i], parts[i + 1U], u);
      next.emplace_back(std::move(u));
    }
    if (parts.size() % 2U == 1U) {
      next.emplace_back(std::move(parts.back()));
    }
    parts = std::move(next);
  }
  return std::move(parts.front());
}

planar_ring to_ring(bg_polygon::ring_type const& r) {
  planar_ring out;
  out.reserve(r.size());
  for (auto const& p : r) {
    out.push_back({p.x(), p.y()});
  }
  return out;
}

planar_multi_polygon to_planar(bg_multi const& m) {
  planar_multi_polygon out;
  for (auto const& poly : m) {
    planar_polygon p;
    p.outer_ = to_ring(poly.outer());
    for (auto const& h : poly.inners()) {
      p.holes_.push_back(to_ring(h));
    }
    out.emplace_back(std::move(p));
  }
  return out;
}

bg_multi to_bg(planar_multi_polygon const& m) {
  bg_multi out;
  for (auto const& p : m) {
    bg_polygon poly;
    for (auto const& pt : p.outer_) {
      bg::append(poly.outer(), bg_point{pt.x_, pt.y_});
    }
    for (auto const& h : p.holes_) {
      auto& ring = poly.inners().emplace_back();
      for (auto const& pt : h) {
        bg::append(ring, bg_point{pt.x_, pt.y_});
      }
    }
    out.emplace_back(std::move(poly));
  }
  return out;
}

}  // namespace

local_projection::local_projection(network const& net) {
  auto lat = 0.0, lon = 0.0;
  for (auto const& s : net.stops_) {
    lat += s.pos_.lat_;
    lon += s.pos_.lon_;
  }
  if (!net.stops_.empty()) {
    lat /= static_cast<double>(net.stops_.size());
    lon /= static_cast<double>(net.stops_.size());
  }
  origin_ = {lat, lon};
  cos_lat_ = std::cos(to_rad(lat));
}

planar_point local_projection::forward(geo_point const p) const {
  return {kEarthRadiusM * to_rad(p.lon_ - origin_.lon_) * cos_lat_,
          kEarthRadiusM * to_rad(p.lat_ - origin_.lat_)};
}

geo_point local_projection::inverse(planar_point const p) const {
  return {origin_.lat_ + p.y_ / kEarthRadiusM * 180.0 / std::numbers::pi,
          origin_.lon_ +
              p.x_ / (kEarthRadiusM * cos_lat_) * 180.0 / std::numbers::pi};
}

double area_m2(planar_multi_polygon const& m) { return bg::area(to_bg(m)); }

double difference_area_m2(planar_multi_polygon const& a,
                          planar_multi_polygon const& b) {
  bg_multi diff;
  bg::difference(to_bg(a), to_bg(b), diff);
  return bg::area(diff);
}

std::vector<time_s> default_bands(time_s const cutoff) {
  std::vector<time_s> bands;
  for (auto t = time_s{20 * 60}; t <= 120 * 60 && t <= cutoff; t += 20 * 60) {
    bands.push_back(t);
  }
  if (bands.empty() || bands.back() != cutoff) {
    bands.push_back(cutoff);
  }
  return bands;
}

isochrone_result isochrone(network const& net, hyper_node const& h,
                           time_s const cutoff, std::vector<time_s> bands) {
  if (cutoff < 0) {
    fail(error_code::invalid_argument, "cutoff must not be negative");
  }
  if (!std::is_sorted(begin(bands), end(bands)) ||
      (!bands.empty() && (bands.front() < 0 || bands.back() > cutoff))) {
    fail(error_code::invalid_argument,
         "band thresholds must ascend within [0, cutoff]");
  }

  auto const fwd = h.dir_ == direction::forward;
  auto const limit = fwd ? h.anchor_ + cutoff : h.anchor_ - cutoff;
  auto const labels = fwd ? earliest_arrival(net, h, {limit})
                          : latest_departure(net, h, {limit});

  isochrone_result r;
  r.dir_ = h.dir_;
  r.endpoints_ = h.endpoints_;
  r.anchor_ = h.anchor_;
  r.cutoff_ = cutoff;
  for (auto s = stop_idx{0U}; s != net.stops_.size(); ++s) {
    if (!labels.reached(s)) {
      continue;
    }
    auto const travel =
        fwd ? *labels.stop_label_[s] - h.anchor_ : h.anchor_ - *labels.stop_label_[s];
    if (travel <= cutoff) {
      r.stop_times_.emplace_back(s, travel);
    }
  }

  auto const proj = local_projection{net};
  for (auto const threshold : bands) {
    isochrone_band band;
    band.threshold_ = threshold;
    std::vector<bg_multi> parts;
    for (auto const& [s, travel] : r.stop_times_) {
      if (travel > threshold) {
        continue;
      }
      auto const radius =
          std::min(net.max_walk_m_,
                   static_cast<double>(threshold - travel) * net.walk_speed_mps_);
      band.circles_.push_back({s, radius});
      if (radius > 0.0) {
        parts.push_back(
            circle_polygon(proj.forward(net.stops_[s].pos_), radius));
      }
    }
    band.area_ = to_planar(union_all(std::move(parts)));
    r.bands_.emplace_back(std::move(band));
  }
  return r;
}

}  // namespace gtfs2stn

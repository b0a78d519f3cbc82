#include "gtfs2stn/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gtfs2stn {

namespace {

constexpr double to_rad(double const deg) {
  return deg * std::numbers::pi / 180.0;
}

constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

}  // namespace

double haversine_m(geo_point const a, geo_point const b) {
  auto const dlat = to_rad(b.lat_ - a.lat_);
  auto const dlon = to_rad(b.lon_ - a.lon_);
  auto const s_lat = std::sin(dlat / 2.0);
  auto const s_lon = std::sin(dlon / 2.0);
  auto const h = s_lat * s_lat + std::cos(to_rad(a.lat_)) *
                                     std::cos(to_rad(b.lat_)) * s_lon * s_lon;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

spatial_index::spatial_index(std::span<geo_point const> points,
                             double const cell_size_deg)
    : points_{points}, cell_size_deg_{cell_size_deg} {
  for (auto i = 0U; i != points.size(); ++i) {
    cells_[key(row_of(points[i].lat_), col_of(points[i].lon_))].push_back(i);
  }
}

double spatial_index::cell_size_for(double const radius_m) {
  return std::max(radius_m / kMetersPerDegree, 1e-6);
}

std::uint64_t spatial_index::key(std::int32_t const row,
                                 std::int32_t const col) {
  return static_cast<std::uint64_t>(static_cast<std::uint32_t>(row)) << 32U |
         static_cast<std::uint32_t>(col);
}

std::int32_t spatial_index::row_of(double const lat) const {
  return static_cast<std::int32_t>(std::floor(lat / cell_size_deg_));
}

std::int32_t spatial_index::col_of(double const lon) const {
  return static_cast<std::int32_t>(std::floor(lon / cell_size_deg_));
}

std::vector<std::uint32_t> spatial_index::candidates(
    geo_point const center, double const radius_m) const {
  // Latitude span is exact on a sphere; the longitude span widens with
  // latitude, so use the cosine at the most poleward latitude touched.
  auto const dlat = 1.01 * radius_m / kMetersPerDegree;
  auto const max_abs_lat = std::abs(center.lat_) + dlat;
  auto const full_lon = max_abs_lat >= 89.0;
  auto const dlon =
      full_lon ? 180.0
               : std::min(180.0, dlat / std::cos(to_rad(max_abs_lat)));

  std::vector<std::uint32_t> out;
  auto const row_lo = row_of(center.lat_ - dlat);
  auto const row_hi = row_of(center.lat_ + dlat);

  auto const visit_cols = [&](std::int32_t const col_lo,
                              std::int32_t const col_hi) {
    for (auto r = row_lo; r <= row_hi; ++r) {
      for (auto c = col_lo; c <= col_hi; ++c) {
        if (auto const it = cells_.find(key(r, c)); it != end(cells_)) {
          out.insert(end(out), begin(it->second), end(it->second));
        }
      }
    }
  };

  if (full_lon || center.lon_ - dlon < -180.0 || center.lon_ + dlon > 180.0) {
    // Wraps the antimeridian: fall back to scanning the whole band.
    visit_cols(col_of(-180.0), col_of(180.0));
  } else {
    visit_cols(col_of(center.lon_ - dlon), col_of(center.lon_ + dlon));
  }
  std::sort(begin(out), end(out));
  out.erase(std::unique(begin(out), end(out)), end(out));
  return out;
}

std::vector<std::uint32_t> spatial_index::within(geo_point const center,
                                                 double const radius_m) const {
  auto out = candidates(center, radius_m);
  std::erase_if(out, [&](std::uint32_t const i) {
    return haversine_m(center, points_[i]) > radius_m;
  });
  return out;
}

std::vector<walk_pair> walk_pairs(std::span<geo_point const> stops,
                                  spatial_index const& index,
                                  double const max_walk_m) {
  std::vector<walk_pair> pairs;
  for (auto a = 0U; a != stops.size(); ++a) {
    for (auto const b : index.candidates(stops[a], max_walk_m)) {
      if (b <= a) {
        continue;
      }
      auto const d = haversine_m(stops[a], stops[b]);
      if (d > 0.0 && d <= max_walk_m) {
        pairs.push_back({a, b, d});
      }
    }
  }
  return pairs;
}

}  // namespace gtfs2stn

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace gtfs2stn {

constexpr double kEarthRadiusM = 6'371'000.0;

struct geo_point {
  friend bool operator==(geo_point const&, geo_point const&) = default;
  bool valid() const {
    return lat_ >= -90.0 && lat_ <= 90.0 && lon_ >= -180.0 && lon_ <= 180.0;
  }
  double lat_{0.0}, lon_{0.0};
};

// Great-circle distance in meters.
double haversine_m(geo_point a, geo_point b);

// Uniform lat/lon bucket grid. radius() queries return a superset of the
// points within the radius; callers filter by exact distance.
struct spatial_index {
  spatial_index(std::span<geo_point const> points, double cell_size_deg);

  // Cell size that keeps a radius_m query within a 3x3 block at the equator.
  static double cell_size_for(double radius_m);

  std::vector<std::uint32_t> candidates(geo_point center,
                                        double radius_m) const;

  // Exact: indices with haversine_m(center, p) <= radius_m, ascending.
  std::vector<std::uint32_t> within(geo_point center, double radius_m) const;

  double cell_size_deg() const { return cell_size_deg_; }

private:
  static std::uint64_t key(std::int32_t row, std::int32_t col);
  std::int32_t row_of(double lat) const;
  std::int32_t col_of(double lon) const;

  std::span<geo_point const> points_;
  double cell_size_deg_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

struct walk_pair {
  friend bool operator==(walk_pair const&, walk_pair const&) = default;
  std::uint32_t a_, b_;  // a_ < b_
  double distance_m_;
};

// Unordered stop pairs with 0 < distance <= max_walk_m, sorted by (a, b).
std::vector<walk_pair> walk_pairs(std::span<geo_point const> stops,
                                  spatial_index const&, double max_walk_m);

}  // namespace gtfs2stn

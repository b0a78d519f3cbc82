#include "gtfs2stn/gateway/ops.h"

#include <algorithm>
#include <charconv>
#include <map>

#include "json.hpp"

#include "gtfs2stn/error.h"

namespace gtfs2stn::gateway {

using json = nlohmann::json;

isochrone_result run_isochrone(network const& net, isochrone_request const& r) {
  return isochrone(net, hyper_node{r.dir_, r.endpoints_, r.anchor_}, r.cutoff_,
                   r.bands_.value_or(default_bands(r.cutoff_)));
}

journey_profile run_profile(network const& net, profile_request const& r) {
  return compute_journey_profile(net, r.origin_, r.destination_,
                                 r.window_.start_, r.window_.end_, r.step_);
}

grid_frequency_map run_grid(feed const& f, grid_request const& r) {
  auto const services = r.services_.empty() ? f.service_ids() : r.services_;
  return grid_frequency(f, services, grid_covering(f, r.cell_deg_), r.window_,
                        r.label_);
}

time_window parse_window(std::string_view const s) {
  auto const dash = s.find('-');
  if (dash == std::string_view::npos) {
    fail(error_code::invalid_argument,
         "window must look like HH:MM-HH:MM, got \"" + std::string{s} + "\"");
  }
  auto const w =
      time_window{parse_clock(s.substr(0, dash)), parse_clock(s.substr(dash + 1U))};
  if (w.start_ > w.end_) {
    fail(error_code::invalid_argument, "window start is after its end");
  }
  return w;
}

time_s parse_duration(std::string_view s) {
  auto unit = 1;
  if (!s.empty()) {
    switch (s.back()) {
      case 's': unit = 1; s.remove_suffix(1); break;
      case 'm': unit = 60; s.remove_suffix(1); break;
      case 'h': unit = 3600; s.remove_suffix(1); break;
      default: break;
    }
  }
  auto value = time_s{0};
  auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() ||
      value < 0 || value > kMaxServiceTime / unit) {
    fail(error_code::invalid_argument,
         "bad duration \"" + std::string{s} + "\"");
  }
  return value * unit;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    auto const comma = s.find(',');
    auto item = s.substr(0, comma);
    while (!item.empty() && item.front() == ' ') {
      item.remove_prefix(1);
    }
    while (!item.empty() && item.back() == ' ') {
      item.remove_suffix(1);
    }
    if (!item.empty()) {
      out.emplace_back(item);
    }
    if (comma == std::string_view::npos) {
      break;
    }
    s.remove_prefix(comma + 1U);
  }
  return out;
}

std::vector<time_s> parse_minute_list(std::string_view const s) {
  std::vector<time_s> out;
  for (auto const& item : split_list(s)) {
    auto minutes = time_s{0};
    auto const [ptr, ec] =
        std::from_chars(item.data(), item.data() + item.size(), minutes);
    if (ec != std::errc{} || ptr != item.data() + item.size() || minutes < 0 ||
        minutes > kMaxServiceTime / 60) {
      fail(error_code::invalid_argument, "bad minute value \"" + item + "\"");
    }
    out.push_back(minutes * 60);
  }
  std::sort(begin(out), end(out));
  out.erase(std::unique(begin(out), end(out)), end(out));
  return out;
}

std::string stops_geojson(feed const& f) {
  auto features = json::array();
  for (auto const& s : f.stops_) {
    features.push_back({{"type", "Feature"},
                        {"geometry",
                         {{"type", "Point"}, {"coordinates", {s.lon_, s.lat_}}}},
                        {"properties", {{"stop_id", s.id_}, {"stop_name", s.name_}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

std::string shapes_geojson(feed const& f) {
  std::map<std::string, std::vector<shape_point const*>> shapes;
  if (f.shapes_.has_value()) {
    for (auto const& p : *f.shapes_) {
      shapes[p.shape_id_].push_back(&p);
    }
  }
  auto features = json::array();
  for (auto& [id, points] : shapes) {
    std::stable_sort(begin(points), end(points), [](auto const* a, auto const* b) {
      return a->sequence_ < b->sequence_;
    });
    auto coords = json::array();
    for (auto const* p : points) {
      coords.push_back({p->lon_, p->lat_});
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
         {"properties", {{"shape_id", id}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

}  // namespace gtfs2stn::gateway

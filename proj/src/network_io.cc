#include <bit>
#include <cstring>

#include <zlib.h>

#include "json.hpp"

#include "gtfs2stn/error.h"
#include "gtfs2stn/network.h"

namespace gtfs2stn {

namespace {

constexpr std::string_view kMagic = "GTFS2STN";

struct writer {
  void u8(std::uint8_t const v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t const v) {
    for (auto i = 0U; i != 4U; ++i) {
      u8(static_cast<std::uint8_t>(v >> (8U * i)));
    }
  }
  void u64(std::uint64_t const v) {
    u32(static_cast<std::uint32_t>(v));
    u32(static_cast<std::uint32_t>(v >> 32U));
  }
  void i32(std::int32_t const v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double const v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view const s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  std::string out_;
};

struct reader {
  void need(std::size_t const n) const {
    if (n > data_.size() - pos_) {
      fail(error_code::corrupt_stream, "unexpected end of network stream");
    }
  }
  std::uint8_t u8() {
    need(1U);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    auto v = std::uint32_t{0U};
    for (auto i = 0U; i != 4U; ++i) {
      v |= static_cast<std::uint32_t>(u8()) << (8U * i);
    }
    return v;
  }
  std::uint64_t u64() {
    auto const lo = static_cast<std::uint64_t>(u32());
    return lo | static_cast<std::uint64_t>(u32()) << 32U;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    auto const n = u32();
    need(n);
    auto s = std::string{data_.substr(pos_, n)};
    pos_ += n;
    return s;
  }
  // Guards reserve() against absurd counts in damaged input.
  std::uint32_t count(std::size_t const min_record_size) {
    auto const n = u32();
    need(static_cast<std::size_t>(n) * min_record_size);
    return n;
  }

  std::string_view data_;
  std::size_t pos_{0U};
};

std::uint32_t checksum(std::string_view const s) {
  return static_cast<std::uint32_t>(
      crc32(0UL, reinterpret_cast<Bytef const*>(s.data()),
            static_cast<uInt>(s.size())));
}

}  // namespace

std::string serialize_network(network const& net) {
  writer w;
  w.out_.append(kMagic);
  w.u8(kNetworkFormatVersion);

  w.f64(net.max_walk_m_);
  w.f64(net.walk_speed_mps_);
  w.i32(net.day_horizon_s_);
  w.u32(static_cast<std::uint32_t>(net.service_ids_.size()));
  for (auto const& s : net.service_ids_) {
    w.str(s);
  }

  w.u32(static_cast<std::uint32_t>(net.stops_.size()));
  for (auto const& s : net.stops_) {
    w.str(s.id_);
    w.str(s.name_);
    w.f64(s.pos_.lat_);
    w.f64(s.pos_.lon_);
  }

  w.u32(static_cast<std::uint32_t>(net.trip_ids_.size()));
  for (auto const& t : net.trip_ids_) {
    w.str(t);
  }

  w.u32(static_cast<std::uint32_t>(net.nodes_.size()));
  for (auto const& n : net.nodes_) {
    w.u32(n.stop_);
    w.i32(n.time_);
  }

  w.u32(static_cast<std::uint32_t>(net.links_.size()));
  for (auto const& l : net.links_) {
    w.u32(l.from_);
    w.u32(l.to_);
    w.u8(static_cast<std::uint8_t>(l.kind_));
    w.i32(l.duration_);
    w.i32(l.walk_);
    w.u32(l.trip_);
  }

  w.u32(checksum(w.out_));
  return std::move(w.out_);
}

network deserialize_network(std::string_view const bytes) {
  if (bytes.size() < kMagic.size() + 1U ||
      bytes.substr(0, kMagic.size()) != kMagic) {
    fail(error_code::corrupt_stream, "not a serialized network");
  }
  if (auto const v = static_cast<std::uint8_t>(bytes[kMagic.size()]);
      v != kNetworkFormatVersion) {
    fail(error_code::version_mismatch,
         "network format version " + std::to_string(v) + ", expected " +
             std::to_string(kNetworkFormatVersion));
  }
  if (bytes.size() < kMagic.size() + 5U) {
    fail(error_code::corrupt_stream, "network stream truncated");
  }
  auto const body = bytes.substr(0, bytes.size() - 4U);
  auto crc_reader = reader{bytes.substr(bytes.size() - 4U)};
  if (crc_reader.u32() != checksum(body)) {
    fail(error_code::corrupt_stream, "network checksum mismatch");
  }

  auto r = reader{body, kMagic.size() + 1U};
  network net;
  net.max_walk_m_ = r.f64();
  net.walk_speed_mps_ = r.f64();
  net.day_horizon_s_ = r.i32();
  for (auto n = r.count(4U); n != 0U; --n) {
    net.service_ids_.push_back(r.str());
  }

  auto const n_stops = r.count(24U);
  net.stops_.reserve(n_stops);
  for (auto i = 0U; i != n_stops; ++i) {
    network_stop s;
    s.id_ = r.str();
    s.name_ = r.str();
    s.pos_.lat_ = r.f64();
    s.pos_.lon_ = r.f64();
    net.stops_.emplace_back(std::move(s));
  }

  auto const n_trips = r.count(4U);
  net.trip_ids_.reserve(n_trips);
  for (auto i = 0U; i != n_trips; ++i) {
    net.trip_ids_.push_back(r.str());
  }

  auto const n_nodes = r.count(8U);
  net.nodes_.reserve(n_nodes);
  for (auto i = 0U; i != n_nodes; ++i) {
    auto const stop = r.u32();
    auto const time = r.i32();
    if (stop >= n_stops ||
        (i != 0U && std::tie(net.nodes_.back().stop_, net.nodes_.back().time_) >=
                        std::tie(stop, time))) {
      fail(error_code::corrupt_stream, "node table out of order");
    }
    net.nodes_.push_back({stop, time});
  }

  auto const n_links = r.count(21U);
  net.links_.reserve(n_links);
  for (auto i = 0U; i != n_links; ++i) {
    link l;
    l.from_ = r.u32();
    l.to_ = r.u32();
    auto const kind = r.u8();
    l.duration_ = r.i32();
    l.walk_ = r.i32();
    l.trip_ = r.u32();
    if (l.from_ >= n_nodes || l.to_ >= n_nodes || kind > 2U ||
        (l.trip_ != kNoTrip && l.trip_ >= n_trips) ||
        (i != 0U && net.links_.back().from_ > l.from_)) {
      fail(error_code::corrupt_stream, "invalid link record");
    }
    l.kind_ = static_cast<link_kind>(kind);
    net.links_.push_back(l);
  }
  if (r.pos_ != body.size()) {
    fail(error_code::corrupt_stream, "trailing bytes in network stream");
  }

  net.finalize();
  return net;
}

std::string network_nodes_geojson(network const& net) {
  auto features = nlohmann::json::array();
  for (auto n = node_idx{0U}; n != net.nodes_.size(); ++n) {
    auto const& node = net.nodes_[n];
    auto const& s = net.stops_[node.stop_];
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "Point"}, {"coordinates", {s.pos_.lon_, s.pos_.lat_}}}},
         {"properties",
          {{"node_id", n}, {"stop_id", s.id_}, {"time_s", node.time_}}}});
  }
  return nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}
      .dump();
}

std::string network_links_geojson(network const& net) {
  auto features = nlohmann::json::array();
  for (auto const& l : net.links_) {
    auto const& from = net.nodes_[l.from_];
    auto const& to = net.nodes_[l.to_];
    auto const& a = net.stops_[from.stop_].pos_;
    auto const& b = net.stops_[to.stop_].pos_;
    auto props = nlohmann::json{{"kind", to_string(l.kind_)},
                                {"from_node", l.from_},
                                {"to_node", l.to_},
                                {"from_time_s", from.time_},
                                {"to_time_s", to.time_},
                                {"duration_s", l.duration_}};
    if (l.trip_ != kNoTrip) {
      props["trip_id"] = net.trip_ids_[l.trip_];
    }
    features.push_back(
        {{"type", "Feature"},
         {"geometry",
          {{"type", "LineString"},
           {"coordinates", {{a.lon_, a.lat_}, {b.lon_, b.lat_}}}}},
         {"properties", std::move(props)}});
  }
  return nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}
      .dump();
}

}  // namespace gtfs2stn

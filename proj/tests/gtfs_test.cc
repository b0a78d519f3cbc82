#include "gtest/gtest.h"

#include <fstream>

#include <zlib.h>

#include "gtfs2stn/error.h"
#include "gtfs2stn/gtfs/csv.h"
#include "gtfs2stn/gtfs/feed.h"
#include "gtfs2stn/gtfs/zip.h"

#include "fixtures.h"

using namespace gtfs2stn;
using namespace gtfs2stn::testing;

namespace {

error_code code_of(auto&& fn) {
  try {
    fn();
  } catch (error const& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return error_code::io;
}

std::size_t count(validation_report const& r, severity const s) {
  return static_cast<std::size_t>(
      std::count_if(begin(r.findings_), end(r.findings_),
                    [&](finding const& f) { return f.severity_ == s; }));
}

// Zip with deflated entries, as produced by common archivers.
std::string deflated_zip(table_files const& files) {
  auto const put16 = [](std::string& s, unsigned v) {
    s.push_back(static_cast<char>(v & 0xFF));
    s.push_back(static_cast<char>((v >> 8) & 0xFF));
  };
  auto const put32 = [&](std::string& s, unsigned v) {
    put16(s, v & 0xFFFF);
    put16(s, v >> 16);
  };
  std::string out, central;
  auto n = 0U;
  for (auto const& [stem, content] : files) {
    auto const name = "feed/" + stem + ".txt";
    std::string packed(compressBound(content.size()) + 64, '\0');
    z_stream zs{};
    deflateInit2(&zs, 9, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(content.data()));
    zs.avail_in = content.size();
    zs.next_out = reinterpret_cast<Bytef*>(packed.data());
    zs.avail_out = packed.size();
    deflate(&zs, Z_FINISH);
    packed.resize(zs.total_out);
    deflateEnd(&zs);
    auto const crc = crc32(0, reinterpret_cast<Bytef const*>(content.data()),
                           content.size());
    auto const offset = out.size();
    for (auto* s : {&out, &central}) {
      put32(*s, s == &out ? 0x04034b50 : 0x02014b50);
      if (s == &central) {
        put16(*s, 20);
      }
      put16(*s, 20);
      put16(*s, 0);
      put16(*s, 8);
      put16(*s, 0);
      put16(*s, 0x21);
      put32(*s, crc);
      put32(*s, packed.size());
      put32(*s, content.size());
      put16(*s, name.size());
      put16(*s, 0);
      if (s == &central) {
        put16(*s, 0);
        put16(*s, 0);
        put16(*s, 0);
        put32(*s, 0);
        put32(*s, offset);
      }
      *s += name;
      if (s == &out) {
        out += packed;
      }
    }
    ++n;
  }
  auto const cd = out.size();
  out += central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, n);
  put16(out, n);
  put32(out, central.size());
  put32(out, cd);
  put16(out, 0);
  return out;
}

}  // namespace

TEST(gtfs_time, parses_after_midnight_hours) {
  EXPECT_EQ(90600, parse_time("25:10:00"));
  EXPECT_EQ(7 * 3600 + 5, parse_time("7:00:05"));
  EXPECT_EQ(0, parse_time(" 00:00:00 "));
  EXPECT_EQ("25:10:00", format_time(90600));
}

TEST(gtfs_time, rejects_malformed) {
  for (auto const* bad : {"", "7:00", "07:60:00", "07:00:60", "a:00:00",
                          "123:00:00", "48:00:00", "07-00-00", "07:0:00"}) {
    EXPECT_EQ(error_code::bad_time, code_of([&] { parse_time(bad); })) << bad;
  }
}

TEST(gtfs_time, format_parse_round_trip_over_two_days) {
  for (auto s = time_s{0}; s < kMaxServiceTime; ++s) {
    ASSERT_EQ(s, parse_time(format_time(s)));
  }
}

TEST(gtfs_time, dates) {
  EXPECT_EQ("20210414", format_date(parse_date("20210414")));
  EXPECT_EQ(2U, weekday_index(parse_date("20210414")));  // Wednesday
  EXPECT_EQ(error_code::bad_date, code_of([] { parse_date("20210231"); }));
  EXPECT_EQ(error_code::bad_date, code_of([] { parse_date("2021-04-14"); }));
}

TEST(gtfs_csv, quoting_bom_and_crlf) {
  auto const t = parse_csv(
      "\xEF\xBB\xBF"
      "a,b,c\r\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n\r\n2,\"multi\nline\", z \r\n");
  ASSERT_EQ(3U, t.header_.size());
  EXPECT_EQ("a", t.header_[0]);
  ASSERT_EQ(2U, t.rows_.size());
  EXPECT_EQ("x, y", t.rows_[0][1]);
  EXPECT_EQ("say \"hi\"", t.rows_[0][2]);
  EXPECT_EQ("multi\nline", t.rows_[1][1]);
  EXPECT_EQ("z", t.rows_[1][2]);
  EXPECT_EQ(4U, t.lines_[1]);
}

TEST(gtfs_load, three_route_fixture_counts) {
  auto const dir = temp_dir("three_route");
  write_tables(dir, three_route_tables());
  auto const f = load_feed(dir);
  EXPECT_EQ(3U, f.routes_.size());
  EXPECT_EQ(9U, f.stops_.size());
  EXPECT_EQ(12U, f.trips_.size());
  EXPECT_EQ(36U, f.stop_times_.size());
  for (auto t = 0U; t != f.trips_.size(); ++t) {
    EXPECT_EQ(3U, f.trip_stop_times(t).size());
  }
}

TEST(gtfs_load, reads_deflated_zip_in_subfolder) {
  auto const dir = temp_dir("zip");
  auto const path = dir / "feed.zip";
  std::ofstream{path, std::ios::binary} << deflated_zip(three_route_tables());
  auto const f = load_feed(path);
  EXPECT_EQ(load(three_route_tables()), f);
  EXPECT_EQ(f, load_feed_from_zip(write_zip(
                   {{"stops.txt", three_route_tables()["stops"]},
                    {"agency.txt", three_route_tables()["agency"]},
                    {"routes.txt", three_route_tables()["routes"]},
                    {"trips.txt", three_route_tables()["trips"]},
                    {"stop_times.txt", three_route_tables()["stop_times"]},
                    {"calendar.txt", three_route_tables()["calendar"]}})));
}

TEST(gtfs_load, corrupt_zip_is_an_io_error) {
  auto z = write_zip({{"stops.txt", "stop_id\n"}});
  z[30 + std::string{"stops.txt"}.size()] ^= 0x55;  // first content byte
  EXPECT_EQ(error_code::io, code_of([&] { read_zip(z); }));
  EXPECT_EQ(error_code::io, code_of([] { read_zip("PK\x03\x04garbage"); }));
}

TEST(gtfs_load, missing_tables) {
  auto t = three_route_tables();
  t.erase("stops");
  try {
    load(t);
    FAIL();
  } catch (error const& e) {
    EXPECT_EQ(error_code::missing_table, e.code());
    EXPECT_NE(std::string{e.what()}.find("stops"), std::string::npos);
  }

  auto no_calendar = three_route_tables();
  no_calendar.erase("calendar");
  EXPECT_EQ(error_code::missing_table, code_of([&] { load(no_calendar); }));

  auto dates_only = three_route_tables();
  dates_only.erase("calendar");
  dates_only["calendar_dates"] =
      "service_id,date,exception_type\nWKDY,20210414,1\nWKND,20210417,1\n";
  EXPECT_EQ(12U, load(dates_only).trips_.size());
}

TEST(gtfs_load, missing_required_column_and_bad_values) {
  auto t = three_route_tables();
  t["trips"] = "route_id,trip_id\nR1,X\n";
  EXPECT_EQ(error_code::malformed_row, code_of([&] { load(t); }));

  auto bad_lat = three_route_tables();
  bad_lat["stops"] = "stop_id,stop_name,stop_lat,stop_lon\nA1,A,north,-86\n";
  EXPECT_EQ(error_code::malformed_row, code_of([&] { load(bad_lat); }));

  auto bad_time = three_route_tables();
  bad_time["stop_times"] =
      "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n"
      "R1_1,7am,07:00:00,A1,1\n";
  EXPECT_EQ(error_code::bad_time, code_of([&] { load(bad_time); }));
}

TEST(gtfs_load, unknown_columns_ignored_and_blank_times_interpolated) {
  auto t = three_route_tables();
  t["stop_times"] =
      "trip_id,arrival_time,departure_time,stop_id,stop_sequence,shape_dist\n"
      "R1_1,07:00:00,07:00:00,A1,1,0\n"
      "R1_1,,,A2,2,1\n"
      "R1_1,07:10:00,,A3,3,2\n";
  auto const f = load(t);
  auto const sts = f.trip_stop_times(*f.trip_idx("R1_1"));
  ASSERT_EQ(3U, sts.size());
  EXPECT_EQ(7 * 3600 + 300, sts[1].arrival_);
  EXPECT_EQ(sts[1].arrival_, sts[1].departure_);
  EXPECT_EQ(7 * 3600 + 600, sts[2].departure_);
}

TEST(gtfs_load, duplicate_stop_sequence_keeps_first_and_warns) {
  auto t = three_route_tables();
  t["stop_times"] += "R1_1,09:00:00,09:00:00,A3,2\n";
  auto const f = load(t);
  auto const sts = f.trip_stop_times(*f.trip_idx("R1_1"));
  ASSERT_EQ(3U, sts.size());
  EXPECT_EQ("A2", sts[1].stop_id_);
  auto const r = validate(f);
  EXPECT_EQ(1U, count(r, severity::warning));
  EXPECT_FALSE(r.has_fatal());
}

TEST(gtfs_validate, consistent_fixture_is_clean) {
  auto const r = validate(load(three_route_tables()));
  EXPECT_TRUE(r.findings_.empty()) << r.to_text();
  EXPECT_EQ(9U, r.counts_.at("stops"));
  EXPECT_EQ(36U, r.counts_.at("stop_times"));
}

TEST(gtfs_validate, unknown_trip_is_one_fatal_finding) {
  auto t = three_route_tables();
  t["stop_times"] += "X,09:00:00,09:00:00,A1,1\n";
  auto const r = validate(load(t));
  ASSERT_EQ(1U, r.findings_.size()) << r.to_text();
  EXPECT_EQ(severity::fatal, r.findings_[0].severity_);
  EXPECT_EQ("stop_times", r.findings_[0].table_);
  EXPECT_NE(r.findings_[0].message_.find("trip X"), std::string::npos);
  EXPECT_TRUE(r.has_fatal());
}

TEST(gtfs_validate, other_foreign_keys_are_fatal) {
  auto t = three_route_tables();
  t["trips"] += "R9,WKDY,T9\nR1,NOSERVICE,T10\n";
  t["stop_times"] += "R1_1,09:00:00,09:00:00,ZZ,4\n";
  auto const r = validate(load(t));
  EXPECT_EQ(3U, count(r, severity::fatal)) << r.to_text();
}

TEST(gtfs_validate, non_monotone_times_warn) {
  auto t = three_route_tables();
  t["stop_times"] =
      "trip_id,arrival_time,departure_time,stop_id,stop_sequence\n"
      "R1_1,07:00:00,07:10:00,A1,1\n"
      "R1_1,07:05:00,07:06:00,A2,2\n";
  t["trips"] = "route_id,service_id,trip_id\nR1,WKDY,R1_1\n";
  auto const r = validate(load(t));
  ASSERT_EQ(1U, r.findings_.size()) << r.to_text();
  EXPECT_EQ(severity::warning, r.findings_[0].severity_);
  EXPECT_EQ("stop_times", r.findings_[0].table_);
}

TEST(gtfs_validate, out_of_range_coordinates_warn) {
  auto t = three_route_tables();
  t["stops"] += "Z,Nowhere,95.0,10\n";
  auto const r = validate(load(t));
  ASSERT_EQ(1U, r.findings_.size());
  EXPECT_EQ(severity::warning, r.findings_[0].severity_);
  EXPECT_NE(r.to_text().find("warning,stops,10,"), std::string::npos);
}

TEST(gtfs_service, calendar_resolution) {
  auto const f = load(three_route_tables());
  auto const wed = active_service_ids(f, parse_date("20210414"));
  EXPECT_EQ(std::set<std::string>{"WKDY"}, wed);
  auto const sun = active_service_ids(f, parse_date("20210418"));
  EXPECT_FALSE(sun.contains("WKDY"));
  EXPECT_TRUE(sun.contains("WKND"));
  EXPECT_TRUE(active_service_ids(f, parse_date("20220101")).empty());
}

TEST(gtfs_service, exceptions_override_mask) {
  auto t = three_route_tables();
  t["calendar_dates"] =
      "service_id,date,exception_type\n"
      "WKDY,20210418,1\n"
      "WKDY,20210414,2\n";
  auto const f = load(t);
  EXPECT_TRUE(active_service_ids(f, parse_date("20210418")).contains("WKDY"));
  EXPECT_FALSE(active_service_ids(f, parse_date("20210414")).contains("WKDY"));
}

TEST(gtfs_service, trips_for_services) {
  auto const f = load(three_route_tables());
  auto const wkdy = trips_for_services(f, {"WKDY"});
  EXPECT_EQ(6U, wkdy.size());
  EXPECT_EQ("R1_1", wkdy.front());
  EXPECT_EQ(12U, trips_for_services(f, {"WKDY", "WKND"}).size());
  EXPECT_EQ(error_code::unknown_service_id,
            code_of([&] { trips_for_services(f, {"NOPE"}); }));
}

TEST(gtfs_frequencies, clones_are_end_exclusive) {
  auto const f = load(frequency_tables());
  auto const x = expand_frequencies(f);
  EXPECT_FALSE(x.trip_idx("FT").has_value());
  std::vector<time_s> firsts;
  for (auto t = 0U; t != x.trips_.size(); ++t) {
    if (x.trips_[t].route_id_ == "F") {
      auto const sts = x.trip_stop_times(t);
      ASSERT_EQ(3U, sts.size());
      firsts.push_back(sts.front().departure_);
      EXPECT_EQ(sts.front().departure_ + 330, sts[1].departure_);
      EXPECT_EQ("SH1", x.trips_[t].shape_id_.value_or(""));
    }
  }
  EXPECT_EQ((std::vector<time_s>{28800, 30600, 32400, 34200}), firsts);
  EXPECT_TRUE(x.trip_idx("L1").has_value());
  EXPECT_FALSE(validate(x).has_fatal());
}

TEST(gtfs_frequencies, single_headway_window_gives_one_clone) {
  auto t = frequency_tables();
  t["frequencies"] =
      "trip_id,start_time,end_time,headway_secs\nFT,08:00:00,09:00:00,3600\n";
  auto const x = expand_frequencies(load(t));
  EXPECT_EQ(2U, x.trips_.size());
}

TEST(gtfs_frequencies, identity_and_idempotence) {
  auto const plain = load(three_route_tables());
  EXPECT_EQ(plain, expand_frequencies(plain));
  auto const once = expand_frequencies(load(frequency_tables()));
  EXPECT_EQ(once, expand_frequencies(once));
}

TEST(gtfs_frequencies, unknown_trip) {
  auto t = frequency_tables();
  t["frequencies"] += "NOPE,08:00:00,09:00:00,600,0\n";
  EXPECT_EQ(error_code::unknown_trip_id,
            code_of([&] { expand_frequencies(load(t)); }));
}

TEST(gtfs_round_trip, write_and_reload) {
  for (auto const& tables : {three_route_tables(), frequency_tables()}) {
    auto const f = load(tables);
    auto const dir = temp_dir("round_trip");
    write_feed(f, dir);
    EXPECT_EQ(f, load_feed(dir));
  }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "gtfs2stn/gtfs/feed.h"

namespace gtfs2stn::testing {

// 3 routes / 9 stops / 12 trips. Six trips run on WKDY (Mon-Fri), six on
// WKND (Sat/Sun), both 2021-04-11..2021-10-02. Walking transfers exist
// between A3-B1 (~133 m) and B3-C1 (~334 m); all other stops are farther
// apart than 0.25 mi.
//
//   R1  A1 -> A2 -> A3   dep 07:00 07:30 08:00 08:30, A2 dwell 1 min
//   R2  B1 -> B2 -> B3   dep 07:20 07:50 08:20 08:50, B2 dwell 1 min
//   R3  C1 -> C2 -> C3   dep 07:40 08:10 08:40 09:10, no dwell
table_files three_route_tables();

// Same network with every trip duplicated (ids suffixed "_x2").
table_files doubled_three_route_tables();

// One trip over S1 -> S2 -> S3 with one-minute dwells:
//   S1 08:00:00/08:01:00, S2 08:05:00/08:06:00, S3 08:09:00/08:10:00.
// S2-S3 are 0.0027 deg of latitude apart (~300.2 m), S1-S2 ~1112 m.
table_files single_trip_tables();

// Grid fixture: trips G_1..G_5 run G1 -> G3 departing every
// 30 min from 08:00 (the last one at 10:00) with a 10 min run. G2 shares
// G1's 0.01 degree cell and is never served; G3 sits alone in its own cell.
table_files grid_tables();

// Frequency-based template trip, transfers, shapes, calendar_dates,
// quoted fields and a UTF-8 BOM.
table_files frequency_tables();

// Randomized variant of the three-route layout: same stops, random
// departures and run times. At most 3 x 6 trips.
table_files random_three_route_tables(std::uint32_t seed);

// Large synthetic feed: stops on a rows x cols lattice spaced spacing_m
// apart; each lattice row is served by routes of route_len stops with
// enough trips to produce about target_events stop_time rows.
feed lattice_feed(std::uint32_t rows, std::uint32_t cols, double spacing_m,
                  std::uint32_t route_len, std::size_t target_events);

feed load(table_files const&);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(std::string const& name);

void write_tables(std::filesystem::path const& dir, table_files const&);

}  // namespace gtfs2stn::testing

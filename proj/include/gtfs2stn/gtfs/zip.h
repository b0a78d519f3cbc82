#pragma once

#include <map>
#include <string>
#include <string_view>

namespace gtfs2stn {

// Minimal reader for the zip archives GTFS feeds ship in: stored and
// deflated entries, no zip64, no encryption. Keys are entry paths.
std::map<std::string, std::string> read_zip(std::string_view archive);

// Writes every entry uncompressed.
std::string write_zip(std::map<std::string, std::string> const& entries);

bool looks_like_zip(std::string_view bytes);

}  // namespace gtfs2stn

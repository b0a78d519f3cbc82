#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtfs2stn {

enum class error_code {
  missing_table,
  malformed_row,
  bad_time,
  bad_date,
  unknown_service_id,
  unknown_trip_id,
  empty_selection,
  version_mismatch,
  corrupt_stream,
  no_such_stop,
  origin_isolated,
  destination_isolated,
  unreached,
  stop_outside_grid,
  grid_mismatch,
  invalid_argument,
  cancelled,
  io
};

std::string_view to_string(error_code);

struct error : public std::runtime_error {
  error(error_code c, std::string const& msg)
      : std::runtime_error{std::string{to_string(c)} + ": " + msg}, code_{c} {}

  error_code code() const noexcept { return code_; }

private:
  error_code code_;
};

[[noreturn]] inline void fail(error_code c, std::string const& msg) {
  throw error{c, msg};
}

}  // namespace gtfs2stn

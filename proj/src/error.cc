#include "gtfs2stn/error.h"

namespace gtfs2stn {

std::string_view to_string(error_code const c) {
  switch (c) {
    case error_code::missing_table: return "MissingTable";
    case error_code::malformed_row: return "MalformedRow";
    case error_code::bad_time: return "BadTime";
    case error_code::bad_date: return "BadDate";
    case error_code::unknown_service_id: return "UnknownServiceId";
    case error_code::unknown_trip_id: return "UnknownTripId";
    case error_code::empty_selection: return "EmptySelection";
    case error_code::version_mismatch: return "VersionMismatch";
    case error_code::corrupt_stream: return "CorruptStream";
    case error_code::no_such_stop: return "NoSuchStop";
    case error_code::origin_isolated: return "OriginIsolated";
    case error_code::destination_isolated: return "DestinationIsolated";
    case error_code::unreached: return "Unreached";
    case error_code::stop_outside_grid: return "StopOutsideGrid";
    case error_code::grid_mismatch: return "GridMismatch";
    case error_code::invalid_argument: return "InvalidArgument";
    case error_code::cancelled: return "Cancelled";
    case error_code::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace gtfs2stn

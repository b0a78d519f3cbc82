#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gtfs2stn {

// RFC 4180 table with a header row. Tolerates a UTF-8 BOM, CRLF line
// endings, quoted fields with embedded separators/newlines and blank lines.
struct csv_table {
  std::optional<std::size_t> column(std::string_view name) const;

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;  // 1-based source line of each row
};

csv_table parse_csv(std::string_view content);

void write_csv_row(std::ostream&, std::span<std::string const> fields);

}  // namespace gtfs2stn

#include "gtfs2stn/gtfs/csv.h"

#include <algorithm>

namespace gtfs2stn {

std::optional<std::size_t> csv_table::column(std::string_view const name) const {
  auto const it = std::find(begin(header_), end(header_), name);
  if (it == end(header_)) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - begin(header_));
}

namespace {

std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

csv_table parse_csv(std::string_view content) {
  if (content.starts_with("\xEF\xBB\xBF")) {
    content.remove_prefix(3);
  }

  csv_table t;
  std::vector<std::string> record;
  std::string field;
  auto quoted = false;
  auto in_quotes = false;
  auto line = std::size_t{1U};
  auto record_line = line;
  auto header_done = false;

  auto const end_field = [&]() {
    record.emplace_back(quoted ? field : std::string{trim_ws(field)});
    field.clear();
    quoted = false;
  };
  auto const end_record = [&]() {
    end_field();
    auto const blank = record.size() == 1U && record.front().empty();
    if (!blank) {
      if (!header_done) {
        t.header_ = std::move(record);
        for (auto& h : t.header_) {
          h = std::string{trim_ws(h)};
        }
        header_done = true;
      } else {
        t.rows_.emplace_back(std::move(record));
        t.lines_.push_back(record_line);
      }
    }
    record.clear();
  };

  for (auto i = std::size_t{0U}; i < content.size(); ++i) {
    auto const c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (trim_ws(field).empty()) {
          field.clear();
          in_quotes = true;
          quoted = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',': end_field(); break;
      case '\r': break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default: field.push_back(c);
    }
  }
  if (!field.empty() || !record.empty() || quoted) {
    end_record();
  }
  return t;
}

void write_csv_row(std::ostream& out, std::span<std::string const> fields) {
  auto first = true;
  for (auto const& f : fields) {
    if (!first) {
      out << ',';
    }
    first = false;
    auto const needs_quotes =
        f.find_first_of(",\"\r\n") != std::string::npos ||
        (!f.empty() && (f.front() == ' ' || f.back() == ' '));
    if (!needs_quotes) {
      out << f;
      continue;
    }
    out << '"';
    for (auto const c : f) {
      if (c == '"') {
        out << '"';
      }
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

}  // namespace gtfs2stn

#include "gtfs2stn/gtfs/zip.h"

#include <cstdint>
#include <cstring>

#include <zlib.h>

#include "gtfs2stn/error.h"

namespace gtfs2stn {

namespace {

constexpr std::uint32_t kLocalHeader = 0x04034b50U;
constexpr std::uint32_t kCentralHeader = 0x02014b50U;
constexpr std::uint32_t kEndOfCentralDir = 0x06054b50U;

struct reader {
  std::uint16_t u16(std::size_t const at) const {
    check(at, 2U);
    return static_cast<std::uint16_t>(byte(at) | byte(at + 1) << 8U);
  }
  std::uint32_t u32(std::size_t const at) const {
    check(at, 4U);
    return static_cast<std::uint32_t>(byte(at)) | byte(at + 1) << 8U |
           byte(at + 2) << 16U | static_cast<std::uint32_t>(byte(at + 3)) << 24U;
  }
  std::string_view slice(std::size_t const at, std::size_t const n) const {
    check(at, n);
    return data_.substr(at, n);
  }
  void check(std::size_t const at, std::size_t const n) const {
    if (at > data_.size() || n > data_.size() - at) {
      fail(error_code::io, "zip archive truncated");
    }
  }
  std::uint32_t byte(std::size_t const at) const {
    return static_cast<unsigned char>(data_[at]);
  }
  std::string_view data_;
};

std::string inflate_raw(std::string_view const in, std::size_t const out_size) {
  auto out = std::string(out_size, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
    fail(error_code::io, "inflateInit2 failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  auto const rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != out_size) {
    fail(error_code::io, "corrupt deflate stream");
  }
  return out;
}

void put16(std::string& s, std::uint32_t const v) {
  s.push_back(static_cast<char>(v & 0xFFU));
  s.push_back(static_cast<char>((v >> 8U) & 0xFFU));
}

void put32(std::string& s, std::uint32_t const v) {
  put16(s, v & 0xFFFFU);
  put16(s, v >> 16U);
}

}  // namespace

bool looks_like_zip(std::string_view const bytes) {
  return bytes.size() >= 4U && bytes.substr(0, 4) == std::string_view{"PK\x03\x04", 4};
}

std::map<std::string, std::string> read_zip(std::string_view const archive) {
  auto const r = reader{archive};
  if (archive.size() < 22U) {
    fail(error_code::io, "not a zip archive");
  }

  // The end-of-central-directory record sits within the last 64 KiB + 22.
  auto eocd = std::string_view::npos;
  auto const lowest = archive.size() > 65557U ? archive.size() - 65557U : 0U;
  for (auto i = archive.size() - 22U + 1U; i-- > lowest;) {
    if (r.u32(i) == kEndOfCentralDir) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) {
    fail(error_code::io, "zip end-of-central-directory not found");
  }

  auto const n_entries = r.u16(eocd + 10U);
  auto pos = static_cast<std::size_t>(r.u32(eocd + 16U));
  std::map<std::string, std::string> entries;
  for (auto e = 0U; e != n_entries; ++e) {
    if (r.u32(pos) != kCentralHeader) {
      fail(error_code::io, "bad zip central directory");
    }
    auto const method = r.u16(pos + 10U);
    auto const crc = r.u32(pos + 16U);
    auto const comp_size = r.u32(pos + 20U);
    auto const size = r.u32(pos + 24U);
    auto const name_len = r.u16(pos + 28U);
    auto const extra_len = r.u16(pos + 30U);
    auto const comment_len = r.u16(pos + 32U);
    auto const local = static_cast<std::size_t>(r.u32(pos + 42U));
    auto name = std::string{r.slice(pos + 46U, name_len)};
    pos += 46U + name_len + extra_len + comment_len;

    if (comp_size == 0xFFFFFFFFU || size == 0xFFFFFFFFU) {
      fail(error_code::io, "zip64 archives are not supported");
    }
    if (name.empty() || name.back() == '/') {
      continue;
    }
    if (r.u32(local) != kLocalHeader) {
      fail(error_code::io, "bad zip local header for " + name);
    }
    auto const data_at =
        local + 30U + r.u16(local + 26U) + r.u16(local + 28U);
    auto const payload = r.slice(data_at, comp_size);

    std::string content;
    switch (method) {
      case 0: content = std::string{payload}; break;
      case 8: content = inflate_raw(payload, size); break;
      default:
        fail(error_code::io, "unsupported zip compression method " +
                                 std::to_string(method) + " for " + name);
    }
    auto const actual_crc = crc32(
        0UL, reinterpret_cast<Bytef const*>(content.data()),
        static_cast<uInt>(content.size()));
    if (actual_crc != crc) {
      fail(error_code::io, "zip CRC mismatch for " + name);
    }
    entries.emplace(std::move(name), std::move(content));
  }
  return entries;
}

std::string write_zip(std::map<std::string, std::string> const& entries) {
  std::string out, central;
  for (auto const& [name, content] : entries) {
    auto const crc = static_cast<std::uint32_t>(
        crc32(0UL, reinterpret_cast<Bytef const*>(content.data()),
              static_cast<uInt>(content.size())));
    auto const offset = static_cast<std::uint32_t>(out.size());
    auto const size = static_cast<std::uint32_t>(content.size());

    put32(out, kLocalHeader);
    put16(out, 20U);  // version needed
    put16(out, 0U);  // flags
    put16(out, 0U);  // stored
    put16(out, 0U);  // mod time
    put16(out, 0x21U);  // mod date 1980-01-01
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, static_cast<std::uint32_t>(name.size()));
    put16(out, 0U);
    out += name;
    out += content;

    put32(central, kCentralHeader);
    put16(central, 20U);
    put16(central, 20U);
    put16(central, 0U);
    put16(central, 0U);
    put16(central, 0U);
    put16(central, 0x21U);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, static_cast<std::uint32_t>(name.size()));
    put16(central, 0U);
    put16(central, 0U);
    put16(central, 0U);
    put16(central, 0U);
    put32(central, 0U);
    put32(central, offset);
    central += name;
  }
  auto const cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndOfCentralDir);
  put16(out, 0U);
  put16(out, 0U);
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0U);
  return out;
}

}  // namespace gtfs2stn

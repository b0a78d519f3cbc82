#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "gtfs2stn/gateway/session.h"

namespace gtfs2stn::gateway {

struct server_config {
  // GTFS2STN_BIND, GTFS2STN_PORT, GTFS2STN_SESSION_TTL_S,
  // GTFS2STN_UPLOAD_CAP_MB, GTFS2STN_PAGE_ROWS override the defaults.
  static server_config from_env();

  std::string bind_{"127.0.0.1"};
  int port_{8080};
  std::size_t upload_cap_bytes_{256U * 1024U * 1024U};
  std::size_t page_rows_{1000U};
  store_config store_;
};

// HTTP front end over a session_store. Request and response bodies are
// JSON except uploads (zip, raw or multipart), network downloads (binary)
// and table-format results (comma-separated text).
class server {
public:
  explicit server(server_config);
  ~server();

  server(server const&) = delete;
  server& operator=(server const&) = delete;

  // Binds config.port_ (0 picks a free port) and returns the bound port,
  // or -1 on failure.
  int bind();

  // Serves on the bound socket until stop(). Blocking.
  bool serve();

  void stop();

  session_store& sessions();

private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

}  // namespace gtfs2stn::gateway

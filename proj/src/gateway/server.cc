#include "gtfs2stn/gateway/server.h"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"

#include "gtfs2stn/analysis.h"
#include "gtfs2stn/error.h"
#include "gtfs2stn/gateway/ops.h"
#include "gtfs2stn/gtfs/zip.h"
#include "gtfs2stn/result_io.h"

namespace gtfs2stn::gateway {

using json = nlohmann::json;

namespace {

constexpr auto kGeoJson = "application/geo+json";
constexpr auto kJson = "application/json";
constexpr auto kCsv = "text/csv";

// Failure that maps directly to an HTTP status.
struct http_error : std::runtime_error {
  http_error(int const status, std::string const& code, std::string const& msg)
      : std::runtime_error{msg}, status_{status}, code_{code} {}
  int status_;
  std::string code_;
};

[[noreturn]] void not_found(std::string const& what) {
  throw http_error{404, "NotFound", what};
}

[[noreturn]] void conflict(std::string const& what) {
  throw http_error{409, "Conflict", what};
}

[[noreturn]] void unprocessable(std::string const& what) {
  throw http_error{422, "InvalidRequest", what};
}

int status_of(error_code const c) {
  switch (c) {
    case error_code::no_such_stop: return 404;
    default: return 422;
  }
}

void send_json(httplib::Response& res, json const& body, int const status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json to_json(job_status const& j, std::string const& session_id) {
  return {{"job_id", j.id_},
          {"phase", to_string(j.phase_)},
          {"progress", j.progress_},
          {"message", j.message_},
          {"status_url", "/sessions/" + session_id + "/jobs/" + j.id_}};
}

json parse_body(httplib::Request const& req) {
  try {
    auto doc = json::parse(req.body.empty() ? std::string{"{}"} : req.body);
    if (!doc.is_object()) {
      unprocessable("request body must be a JSON object");
    }
    return doc;
  } catch (json::parse_error const& e) {
    unprocessable(std::string{"malformed JSON: "} + e.what());
  }
}

time_s clock_value(json const& v, std::string const& name) {
  if (v.is_number_integer()) {
    auto const t = v.get<std::int64_t>();
    if (t < 0 || t > kMaxServiceTime) {
      unprocessable(name + " out of range");
    }
    return static_cast<time_s>(t);
  }
  if (v.is_string()) {
    return parse_clock(v.get<std::string>());
  }
  unprocessable(name + " must be \"HH:MM:SS\" or integer seconds");
}

query_endpoint endpoint_value(json const& v) {
  if (v.is_string()) {
    return parse_endpoint(v.get<std::string>());
  }
  if (v.is_object() && v.contains("lat") && v.contains("lon")) {
    return geo_point{v.at("lat").get<double>(), v.at("lon").get<double>()};
  }
  unprocessable("endpoint must be a stop id, \"lat,lon\" or {lat, lon}");
}

std::set<std::string> string_set(json const& v, std::string const& name) {
  if (!v.is_array()) {
    unprocessable(name + " must be an array of strings");
  }
  std::set<std::string> out;
  for (auto const& x : v) {
    out.insert(x.get<std::string>());
  }
  return out;
}

time_window window_value(json const& v) {
  if (v.is_string()) {
    return parse_window(v.get<std::string>());
  }
  if (v.is_object()) {
    auto const w = time_window{clock_value(v.at("start"), "window.start"),
                               clock_value(v.at("end"), "window.end")};
    if (w.start_ > w.end_) {
      unprocessable("window start is after its end");
    }
    return w;
  }
  unprocessable("window must be \"HH:MM-HH:MM\" or {start, end}");
}

isochrone_request isochrone_body(json const& b) {
  isochrone_request r;
  if (b.contains("origins")) {
    for (auto const& e : b.at("origins")) {
      r.endpoints_.push_back(endpoint_value(e));
    }
  } else if (b.contains("origin")) {
    r.endpoints_.push_back(endpoint_value(b.at("origin")));
  }
  if (r.endpoints_.empty()) {
    unprocessable("origins must name at least one stop or coordinate");
  }
  if (b.contains("depart") && b.contains("arrive")) {
    unprocessable("give either depart or arrive, not both");
  }
  auto const dir = b.value("direction", b.contains("arrive") ? "arrive" : "depart");
  if (dir != "depart" && dir != "arrive") {
    unprocessable("direction must be \"depart\" or \"arrive\"");
  }
  r.dir_ = dir == "depart" ? direction::forward : direction::reverse;
  auto const key = b.contains("arrive") ? "arrive" : "depart";
  if (!b.contains(key)) {
    unprocessable("missing departure or arrival time");
  }
  r.anchor_ = clock_value(b.at(key), key);
  if (!b.contains("cutoff_s") || !b.at("cutoff_s").is_number_integer()) {
    unprocessable("cutoff_s must be an integer number of seconds");
  }
  r.cutoff_ = b.at("cutoff_s").get<time_s>();
  if (b.contains("bands") && !b.at("bands").is_null()) {
    r.bands_ = b.at("bands").get<std::vector<time_s>>();
  }
  return r;
}

profile_request profile_body(json const& b) {
  profile_request r;
  if (!b.contains("origin")) {
    unprocessable("missing origin");
  }
  r.origin_ = endpoint_value(b.at("origin"));
  auto const dest_key = b.contains("dest") ? "dest" : "destination";
  if (!b.contains(dest_key)) {
    unprocessable("missing dest");
  }
  r.destination_ = endpoint_value(b.at(dest_key));
  if (!b.contains("window")) {
    unprocessable("missing window");
  }
  r.window_ = window_value(b.at("window"));
  if (b.contains("step")) {
    auto const& s = b.at("step");
    r.step_ = s.is_string() ? parse_duration(s.get<std::string>())
                            : s.get<time_s>();
  } else if (b.contains("step_s")) {
    r.step_ = b.at("step_s").get<time_s>();
  }
  return r;
}

}  // namespace

server_config server_config::from_env() {
  server_config c;
  auto const env = [](char const* name) -> std::optional<std::string> {
    if (auto const* v = std::getenv(name); v != nullptr && *v != '\0') {
      return std::string{v};
    }
    return std::nullopt;
  };
  auto const number = [](std::string const& name, std::string const& v) {
    try {
      std::size_t pos = 0U;
      auto const n = std::stoll(v, &pos);
      if (pos != v.size() || n < 0) {
        throw std::invalid_argument{v};
      }
      return n;
    } catch (std::exception const&) {
      fail(error_code::invalid_argument, name + " must be a non-negative integer");
    }
  };
  if (auto const v = env("GTFS2STN_BIND")) {
    c.bind_ = *v;
  }
  if (auto const v = env("GTFS2STN_PORT")) {
    c.port_ = static_cast<int>(number("GTFS2STN_PORT", *v));
  }
  if (auto const v = env("GTFS2STN_SESSION_TTL_S")) {
    c.store_.ttl_ = std::chrono::seconds{number("GTFS2STN_SESSION_TTL_S", *v)};
  }
  if (auto const v = env("GTFS2STN_UPLOAD_CAP_MB")) {
    c.upload_cap_bytes_ = static_cast<std::size_t>(
        number("GTFS2STN_UPLOAD_CAP_MB", *v) * 1024 * 1024);
  }
  if (auto const v = env("GTFS2STN_PAGE_ROWS")) {
    c.page_rows_ = static_cast<std::size_t>(number("GTFS2STN_PAGE_ROWS", *v));
  }
  return c;
}

struct server::impl {
  explicit impl(server_config c) : config_{std::move(c)}, store_{config_.store_} {
    routes();
  }

  using handler = std::function<void(httplib::Request const&,
                                     httplib::Response&)>;

  // Maps library and request errors to status codes and a JSON body.
  static handler guarded(handler h) {
    return [h = std::move(h)](httplib::Request const& req,
                              httplib::Response& res) {
      try {
        h(req, res);
      } catch (http_error const& e) {
        send_json(res, {{"error", e.code_}, {"message", e.what()}}, e.status_);
      } catch (error const& e) {
        send_json(res,
                  {{"error", std::string{to_string(e.code())}},
                   {"message", e.what()}},
                  status_of(e.code()));
      } catch (json::exception const& e) {
        send_json(res, {{"error", "InvalidRequest"}, {"message", e.what()}},
                  422);
      } catch (std::exception const& e) {
        send_json(res, {{"error", "Internal"}, {"message", e.what()}}, 500);
      }
    };
  }

  std::shared_ptr<session> session_of(httplib::Request const& req) {
    auto const& id = req.path_params.at("id");
    auto s = store_.find(id);
    if (s == nullptr) {
      not_found("unknown or expired session " + id);
    }
    return s;
  }

  static std::shared_ptr<loaded_feed const> feed_of(session const& s) {
    auto const lock = std::lock_guard{s.mutex_};
    if (s.feed_ == nullptr) {
      conflict("no feed uploaded");
    }
    return s.feed_;
  }

  static std::shared_ptr<built_network const> network_of(session const& s) {
    auto const lock = std::lock_guard{s.mutex_};
    if (s.network_ == nullptr) {
      conflict("network not built");
    }
    return s.network_;
  }

  void routes() {
    auto& svr = server_;
    svr.set_payload_max_length(config_.upload_cap_bytes_);

    svr.Get("/health", [](auto const&, auto& res) {
      send_json(res, {{"status", "ok"}});
    });

    svr.Post("/sessions", guarded([this](auto const&, auto& res) {
      auto const s = store_.create();
      send_json(res, {{"session_id", s->id_}}, 201);
    }));

    svr.Get("/sessions/:id", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      auto const lock = std::lock_guard{s->mutex_};
      send_json(res, {{"session_id", s->id_},
                      {"feed", s->feed_ != nullptr},
                      {"network", s->network_ != nullptr},
                      {"running_job", s->running_job_.has_value()
                                          ? json(*s->running_job_)
                                          : json(nullptr)}});
    }));

    svr.Delete("/sessions/:id", guarded([this](auto const& req, auto& res) {
      if (!store_.remove(req.path_params.at("id"))) {
        not_found("unknown or expired session");
      }
      res.status = 204;
    }));

    svr.Post("/sessions/:id/feed", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      std::string archive;
      if (req.is_multipart_form_data()) {
        if (req.has_file("feed")) {
          archive = req.get_file_value("feed").content;
        } else if (!req.files.empty()) {
          archive = req.files.begin()->second.content;
        }
      } else {
        archive = req.body;
      }
      if (!looks_like_zip(archive)) {
        unprocessable("upload is not a zip archive");
      }
      auto const job = store_.start_upload(s, std::move(archive));
      if (!job.has_value()) {
        conflict("a job is already running in this session");
      }
      send_json(res, to_json(*job, s->id_), 202);
    }));

    svr.Get("/sessions/:id/jobs/:job", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      auto const job = store_.job(*s, req.path_params.at("job"));
      if (!job.has_value()) {
        not_found("unknown job");
      }
      send_json(res, to_json(*job, s->id_));
    }));

    svr.Delete("/sessions/:id/jobs/:job", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      auto const& id = req.path_params.at("job");
      if (!store_.job(*s, id).has_value()) {
        not_found("unknown job");
      }
      if (!store_.cancel(*s, id)) {
        conflict("job is not running");
      }
      send_json(res, to_json(*store_.job(*s, id), s->id_), 202);
    }));

    svr.Get("/sessions/:id/feed", guarded([this](auto const& req, auto& res) {
      auto const f = feed_of(*session_of(req));
      auto findings = json::array();
      for (auto const& x : f->report_.findings_) {
        findings.push_back(
            {{"severity", x.severity_ == severity::fatal ? "fatal" : "warning"},
             {"table", x.table_},
             {"row", x.row_},
             {"message", x.message_}});
      }
      send_json(res, {{"counts", f->report_.counts_},
                      {"service_ids", f->feed_.service_ids()},
                      {"findings", findings}});
    }));

    svr.Get("/sessions/:id/feed/tables", guarded([this](auto const& req, auto& res) {
      auto const f = feed_of(*session_of(req));
      auto tables = json::array();
      for (auto const& [name, t] : f->tables_) {
        tables.push_back(
            {{"name", name}, {"columns", t.header_}, {"rows", t.rows_.size()}});
      }
      send_json(res, {{"tables", tables}, {"page_size", config_.page_rows_}});
    }));

    svr.Get("/sessions/:id/feed/tables/:name", guarded([this](auto const& req, auto& res) {
      auto const f = feed_of(*session_of(req));
      auto const it = f->tables_.find(req.path_params.at("name"));
      if (it == end(f->tables_)) {
        not_found("unknown table " + req.path_params.at("name"));
      }
      auto page = std::size_t{0U};
      if (req.has_param("page")) {
        try {
          std::size_t pos = 0U;
          auto const& p = req.get_param_value("page");
          page = std::stoul(p, &pos);
          if (pos != p.size()) {
            throw std::invalid_argument{p};
          }
        } catch (std::exception const&) {
          unprocessable("page must be a non-negative integer");
        }
      }
      auto const& t = it->second;
      auto const size = std::max<std::size_t>(config_.page_rows_, 1U);
      auto const first = std::min(t.rows_.size(), page * size);
      auto const last = std::min(t.rows_.size(), first + size);
      send_json(res, {{"table", it->first},
                      {"page", page},
                      {"page_size", size},
                      {"total_rows", t.rows_.size()},
                      {"pages", (t.rows_.size() + size - 1U) / size},
                      {"columns", t.header_},
                      {"rows", std::vector<std::vector<std::string>>(
                                   t.rows_.begin() + first, t.rows_.begin() + last)}});
    }));

    svr.Get("/sessions/:id/feed/stops.geojson", guarded([this](auto const& req, auto& res) {
      res.set_content(stops_geojson(feed_of(*session_of(req))->feed_), kGeoJson);
    }));

    svr.Get("/sessions/:id/feed/shapes.geojson", guarded([this](auto const& req, auto& res) {
      res.set_content(shapes_geojson(feed_of(*session_of(req))->feed_), kGeoJson);
    }));

    svr.Post("/sessions/:id/network", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      auto const f = feed_of(*s);
      auto const body = parse_body(req);
      build_config cfg;
      if (!body.contains("service_ids")) {
        unprocessable("service_ids is required");
      }
      cfg.service_ids_ = string_set(body.at("service_ids"), "service_ids");
      if (cfg.service_ids_.empty()) {
        unprocessable("select at least one service id");
      }
      cfg.max_walk_m_ = body.value("max_walk_m", cfg.max_walk_m_);
      cfg.walk_speed_mps_ = body.value("walk_speed_mps", cfg.walk_speed_mps_);
      cfg.check();
      auto const known = f->feed_.service_ids();
      for (auto const& id : cfg.service_ids_) {
        if (!known.contains(id)) {
          fail(error_code::unknown_service_id, id);
        }
      }
      auto const job = store_.start_build(s, std::move(cfg));
      if (!job.has_value()) {
        conflict("a job is already running in this session");
      }
      send_json(res, to_json(*job, s->id_), 202);
    }));

    svr.Get("/sessions/:id/network", guarded([this](auto const& req, auto& res) {
      auto const s = session_of(req);
      auto const n = network_of(*s);
      auto const [waiting, transit, walking] = n->network_.link_counts();
      send_json(res,
                {{"nodes", n->network_.nodes_.size()},
                 {"links",
                  {{"waiting", waiting}, {"transit", transit}, {"walking", walking}}},
                 {"stops", n->network_.stops_.size()},
                 {"trips", n->network_.trip_ids_.size()},
                 {"service_ids", n->network_.service_ids_},
                 {"max_walk_m", n->network_.max_walk_m_},
                 {"walk_speed_mps", n->network_.walk_speed_mps_},
                 {"download", "/sessions/" + s->id_ + "/network/download"}});
    }));

    svr.Get("/sessions/:id/network/download", guarded([this](auto const& req, auto& res) {
      auto const n = network_of(*session_of(req));
      res.set_header("Content-Disposition", "attachment; filename=\"network.stn\"");
      res.set_content(serialize_network(n->network_), "application/octet-stream");
    }));

    svr.Get("/sessions/:id/network/nodes.geojson", guarded([this](auto const& req, auto& res) {
      res.set_content(network_nodes_geojson(network_of(*session_of(req))->network_),
                      kGeoJson);
    }));

    svr.Get("/sessions/:id/network/links.geojson", guarded([this](auto const& req, auto& res) {
      res.set_content(network_links_geojson(network_of(*session_of(req))->network_),
                      kGeoJson);
    }));

    svr.Post("/sessions/:id/isochrone", guarded([this](auto const& req, auto& res) {
      auto const n = network_of(*session_of(req));
      auto const body = parse_body(req);
      auto const r = run_isochrone(n->network_, isochrone_body(body));
      if (body.value("format", "geojson") == "table") {
        res.set_content(isochrone_table(n->network_, r), kCsv);
      } else {
        res.set_content(isochrone_geojson(n->network_, r), kGeoJson);
      }
    }));

    svr.Post("/sessions/:id/profile", guarded([this](auto const& req, auto& res) {
      auto const n = network_of(*session_of(req));
      auto const body = parse_body(req);
      auto const p = run_profile(n->network_, profile_body(body));
      if (body.value("format", "json") == "table") {
        res.set_content(profile_table(p), kCsv);
      } else {
        res.set_content(profile_json(n->network_, p), kJson);
      }
    }));

    svr.Post("/sessions/:id/grid", guarded([this](auto const& req, auto& res) {
      auto const f = feed_of(*session_of(req));
      auto const body = parse_body(req);
      grid_request r;
      if (body.contains("service_ids")) {
        r.services_ = string_set(body.at("service_ids"), "service_ids");
      }
      r.cell_deg_ = body.value("cell_deg", r.cell_deg_);
      if (!body.contains("window")) {
        unprocessable("missing window");
      }
      r.window_ = window_value(body.at("window"));
      r.label_ = body.value("label", "");
      auto const m = run_grid(f->feed_, r);
      if (body.value("format", "geojson") == "table") {
        res.set_content(grid_table(m), kCsv);
      } else {
        res.set_content(grid_geojson(m), kGeoJson);
      }
    }));

    svr.Post("/sessions/:id/grid/diff", guarded([this](auto const& req, auto& res) {
      session_of(req);
      auto const body = parse_body(req);
      if (!body.contains("a") || !body.contains("b")) {
        unprocessable("grid diff needs documents a and b");
      }
      auto const doc = [&](char const* key) {
        auto const& v = body.at(key);
        return parse_grid_geojson(v.is_string() ? v.template get<std::string>()
                                                : v.dump());
      };
      auto const d = grid_diff(doc("a"), doc("b"));
      if (body.value("format", "geojson") == "table") {
        res.set_content(grid_diff_table(d), kCsv);
      } else {
        res.set_content(grid_diff_geojson(d), kGeoJson);
      }
    }));
  }

  server_config config_;
  session_store store_;
  httplib::Server server_;
};

server::server(server_config c) : impl_{std::make_unique<impl>(std::move(c))} {}

server::~server() { stop(); }

int server::bind() {
  auto const& c = impl_->config_;
  if (c.port_ == 0) {
    return impl_->server_.bind_to_any_port(c.bind_);
  }
  return impl_->server_.bind_to_port(c.bind_, c.port_) ? c.port_ : -1;
}

bool server::serve() { return impl_->server_.listen_after_bind(); }

void server::stop() { impl_->server_.stop(); }

session_store& server::sessions() { return impl_->store_; }

}  // namespace gtfs2stn::gateway

#include "gtfs2stn/gateway/cli.h"

#include <csignal>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "gtfs2stn/analysis.h"
#include "gtfs2stn/error.h"
#include "gtfs2stn/gateway/ops.h"
#include "gtfs2stn/gateway/server.h"
#include "gtfs2stn/result_io.h"

namespace gtfs2stn::gateway {

namespace {

std::string read_file(std::string const& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) {
    fail(error_code::io, "cannot read " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_output(std::string const& path, std::string const& content,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f{path, std::ios::binary};
  f << content;
  if (!f) {
    fail(error_code::io, "cannot write " + path);
  }
}

network read_network(std::string const& path) {
  return deserialize_network(read_file(path));
}

std::set<std::string> service_set(std::string const& list) {
  auto const items = split_list(list);
  return {begin(items), end(items)};
}

server* running_server = nullptr;

void on_signal(int) {
  if (running_server != nullptr) {
    running_server->stop();
  }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"GTFS feeds to spatiotemporal networks, isochrones and "
               "journey profiles",
               "gtfs2stn"};
  app.require_subcommand(1);

  // validate
  std::string feed_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a GTFS feed");
  validate_cmd->add_option("feed", feed_path, "feed directory or zip")->required();

  // build
  std::string services, output;
  auto cfg = build_config{};
  auto* build_cmd = app.add_subcommand("build", "build a network from a feed");
  build_cmd->add_option("feed", feed_path, "feed directory or zip")->required();
  build_cmd->add_option("--services", services,
                        "comma-separated service ids (default: all)");
  build_cmd->add_option("--max-walk", cfg.max_walk_m_, "meters");
  build_cmd->add_option("--walk-speed", cfg.walk_speed_mps_, "meters/second");
  build_cmd->add_option("-o,--output", output, "network file")->required();

  // isochrone
  std::string net_path, depart, bands;
  std::vector<std::string> from;
  int cutoff_min = 0;
  bool reverse = false, table = false;
  auto* iso_cmd = app.add_subcommand("isochrone", "reachable area");
  iso_cmd->add_option("network", net_path, "network file")->required();
  iso_cmd->add_option("--from", from, "stop id or lat,lon (repeatable)")
      ->required()
      ->allow_extra_args(false);
  iso_cmd->add_option("--depart", depart,
                      "HH:MM[:SS]; the arrival deadline with --reverse")
      ->required();
  iso_cmd->add_option("--cutoff", cutoff_min, "minutes")->required();
  iso_cmd->add_flag("--reverse", reverse, "arrive-by search");
  iso_cmd->add_option("--bands", bands, "comma-separated minutes");
  iso_cmd->add_flag("--table", table, "write stop_id,travel_time_s instead");
  iso_cmd->add_option("-o,--output", output, "output file (default stdout)");

  // profile
  std::string to, window = "06:00-22:00", step = "10m";
  bool as_json = false;
  auto* profile_cmd = app.add_subcommand("profile", "journey times over a window");
  profile_cmd->add_option("network", net_path, "network file")->required();
  profile_cmd->add_option("--from", from, "stop id or lat,lon")
      ->required()
      ->expected(1);
  profile_cmd->add_option("--to", to, "stop id or lat,lon")->required();
  profile_cmd->add_option("--window", window, "HH:MM-HH:MM");
  profile_cmd->add_option("--step", step, "e.g. 10m, 90s");
  profile_cmd->add_flag("--json", as_json, "write the JSON document");
  profile_cmd->add_option("-o,--output", output, "output file (default stdout)");

  // grid
  double cell = 0.01;
  std::string label;
  auto* grid_cmd = app.add_subcommand("grid", "visit frequency per grid cell");
  grid_cmd->add_option("feed", feed_path, "feed directory or zip")->required();
  grid_cmd->add_option("--services", services,
                       "comma-separated service ids (default: all)");
  grid_cmd->add_option("--cell", cell, "cell size in degrees");
  grid_cmd->add_option("--window", window, "HH:MM-HH:MM")->required();
  grid_cmd->add_option("--label", label, "label stored in the output");
  grid_cmd->add_flag("--table", table, "write comma-separated rows instead");
  grid_cmd->add_option("-o,--output", output, "output file (default stdout)");

  // grid-diff
  std::string grid_a, grid_b;
  auto* diff_cmd = app.add_subcommand("grid-diff", "b minus a per grid cell");
  diff_cmd->add_option("a", grid_a, "grid GeoJSON")->required();
  diff_cmd->add_option("b", grid_b, "grid GeoJSON")->required();
  diff_cmd->add_flag("--table", table, "write comma-separated rows instead");
  diff_cmd->add_option("-o,--output", output, "output file (default stdout)");

  // export-geojson
  std::string nodes_path, links_path;
  auto* export_cmd =
      app.add_subcommand("export-geojson", "network nodes and links as GeoJSON");
  export_cmd->add_option("network", net_path, "network file")->required();
  export_cmd->add_option("--nodes", nodes_path, "nodes output file");
  export_cmd->add_option("--links", links_path, "links output file");

  // serve
  auto srv_cfg = server_config{};
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--bind", srv_cfg.bind_, "address (GTFS2STN_BIND)");
  serve_cmd->add_option("--port", srv_cfg.port_, "port (GTFS2STN_PORT)");

  try {
    srv_cfg = server_config::from_env();
  } catch (error const& e) {
    err << e.what() << '\n';
    return 1;
  }

  std::reverse(begin(args), end(args));
  try {
    app.parse(std::move(args));
  } catch (CLI::ParseError const& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*validate_cmd) {
      feed f;
      try {
        f = load_feed(feed_path);
      } catch (error const& e) {
        err << e.what() << '\n';
        return 2;
      }
      auto const report = validate(f);
      out << report.to_text();
      return report.has_fatal() ? 1 : 0;
    }

    if (*build_cmd) {
      auto const f = load_feed(feed_path);
      cfg.service_ids_ = services.empty() ? f.service_ids() : service_set(services);
      auto const net = build_network(f, cfg);
      write_output(output, serialize_network(net), out);
      auto const [waiting, transit, walking] = net.link_counts();
      out << "nodes " << net.nodes_.size() << '\n'
          << "waiting_links " << waiting << '\n'
          << "transit_links " << transit << '\n'
          << "walking_links " << walking << '\n';
      return 0;
    }

    if (*iso_cmd) {
      auto const net = read_network(net_path);
      isochrone_request r;
      for (auto const& f : from) {
        r.endpoints_.push_back(parse_endpoint(f));
      }
      r.dir_ = reverse ? direction::reverse : direction::forward;
      r.anchor_ = parse_clock(depart);
      r.cutoff_ = cutoff_min * 60;
      if (!bands.empty()) {
        r.bands_ = parse_minute_list(bands);
      }
      auto const result = run_isochrone(net, r);
      write_output(output,
                   table ? isochrone_table(net, result)
                         : isochrone_geojson(net, result),
                   out);
      return 0;
    }

    if (*profile_cmd) {
      auto const net = read_network(net_path);
      auto const p = run_profile(net, {parse_endpoint(from.front()),
                                       parse_endpoint(to), parse_window(window),
                                       parse_duration(step)});
      write_output(output, as_json ? profile_json(net, p) : profile_table(p),
                   out);
      return 0;
    }

    if (*grid_cmd) {
      auto const f = load_feed(feed_path);
      auto const m = run_grid(
          f, {service_set(services), cell, parse_window(window), label});
      write_output(output, table ? grid_table(m) : grid_geojson(m), out);
      return 0;
    }

    if (*diff_cmd) {
      auto const d = grid_diff(parse_grid_geojson(read_file(grid_a)),
                               parse_grid_geojson(read_file(grid_b)));
      for (auto const& w : d.warnings_) {
        err << "warning: " << w << '\n';
      }
      write_output(output, table ? grid_diff_table(d) : grid_diff_geojson(d),
                   out);
      return 0;
    }

    if (*export_cmd) {
      auto const net = read_network(net_path);
      if (nodes_path.empty() && links_path.empty()) {
        err << "give --nodes and/or --links\n";
        return 1;
      }
      if (!nodes_path.empty()) {
        write_output(nodes_path, network_nodes_geojson(net), out);
      }
      if (!links_path.empty()) {
        write_output(links_path, network_links_geojson(net), out);
      }
      return 0;
    }

    if (*serve_cmd) {
      server s{srv_cfg};
      auto const port = s.bind();
      if (port < 0) {
        err << "cannot bind " << srv_cfg.bind_ << ':' << srv_cfg.port_ << '\n';
        return 1;
      }
      out << "listening on " << srv_cfg.bind_ << ':' << port << std::endl;
      running_server = &s;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      auto const ok = s.serve();
      running_server = nullptr;
      return ok ? 0 : 1;
    }
  } catch (error const& e) {
    err << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace gtfs2stn::gateway

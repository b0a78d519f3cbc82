#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "gtfs2stn/gtfs/feed.h"

namespace gtfs2stn {

bool validation_report::has_fatal() const {
  return std::any_of(begin(findings_), end(findings_), [](finding const& f) {
    return f.severity_ == severity::fatal;
  });
}

std::string validation_report::to_text() const {
  std::ostringstream out;
  for (auto const& [table, n] : counts_) {
    out << "count," << table << ',' << n << '\n';
  }
  for (auto const& f : findings_) {
    out << (f.severity_ == severity::fatal ? "fatal" : "warning") << ','
        << f.table_ << ',' << f.row_ << ',' << f.message_ << '\n';
  }
  return out.str();
}

validation_report validate(feed const& f) {
  validation_report r;
  r.counts_ = {{"agency", f.agencies_.size()},
               {"stops", f.stops_.size()},
               {"routes", f.routes_.size()},
               {"trips", f.trips_.size()},
               {"stop_times", f.stop_times_.size()},
               {"calendar", f.calendars_.size()},
               {"calendar_dates", f.calendar_exceptions_.size()}};
  if (f.frequencies_.has_value()) {
    r.counts_["frequencies"] = f.frequencies_->size();
  }
  if (f.transfers_.has_value()) {
    r.counts_["transfers"] = f.transfers_->size();
  }
  if (f.shapes_.has_value()) {
    r.counts_["shapes"] = f.shapes_->size();
  }

  r.findings_ = f.load_findings_;
  auto const add = [&](severity const s, std::string table, std::size_t row,
                       std::string msg) {
    r.findings_.push_back({s, std::move(table), row, std::move(msg)});
  };

  std::unordered_set<std::string> route_ids;
  for (auto const& rt : f.routes_) {
    route_ids.insert(rt.id_);
  }
  auto const services = f.service_ids();

  for (auto i = std::size_t{0U}; i != f.stops_.size(); ++i) {
    auto const& s = f.stops_[i];
    if (!(s.lat_ >= -90.0 && s.lat_ <= 90.0) ||
        !(s.lon_ >= -180.0 && s.lon_ <= 180.0)) {
      add(severity::warning, "stops", i + 1U,
          "stop " + s.id_ + " has out-of-range coordinates");
    }
  }

  for (auto i = std::size_t{0U}; i != f.trips_.size(); ++i) {
    auto const& t = f.trips_[i];
    if (!route_ids.contains(t.route_id_)) {
      add(severity::fatal, "trips", i + 1U,
          "trip " + t.id_ + " references unknown route " + t.route_id_);
    }
    if (!services.contains(t.service_id_)) {
      add(severity::fatal, "trips", i + 1U,
          "trip " + t.id_ + " references unknown service " + t.service_id_);
    }
  }

  auto const orphans = f.orphan_stop_times();
  auto const orphan_base = f.stop_times_.size() - orphans.size();
  for (auto i = std::size_t{0U}; i != orphans.size(); ++i) {
    if (i == 0U || orphans[i].trip_id_ != orphans[i - 1U].trip_id_) {
      add(severity::fatal, "stop_times", orphan_base + i + 1U,
          "stop_times reference unknown trip " + orphans[i].trip_id_);
    }
  }

  for (auto i = std::size_t{0U}; i != f.stop_times_.size(); ++i) {
    auto const& st = f.stop_times_[i];
    if (!f.stop_idx(st.stop_id_).has_value()) {
      add(severity::fatal, "stop_times", i + 1U,
          "trip " + st.trip_id_ + " seq " + std::to_string(st.stop_sequence_) +
              " references unknown stop " + st.stop_id_);
    }
    if (st.arrival_ > st.departure_) {
      add(severity::warning, "stop_times", i + 1U,
          "trip " + st.trip_id_ + " seq " + std::to_string(st.stop_sequence_) +
              " departs before it arrives");
    }
  }

  for (auto t = 0U; t != f.trips_.size(); ++t) {
    auto const sts = f.trip_stop_times(t);
    auto const base = static_cast<std::size_t>(f.trip_offsets_[t]);
    for (auto i = std::size_t{1U}; i < sts.size(); ++i) {
      if (sts[i].stop_sequence_ <= sts[i - 1U].stop_sequence_) {
        add(severity::warning, "stop_times", base + i + 1U,
            "trip " + f.trips_[t].id_ + " stop_sequence not increasing");
      }
      if (sts[i - 1U].departure_ > sts[i].arrival_) {
        add(severity::warning, "stop_times", base + i + 1U,
            "trip " + f.trips_[t].id_ + " arrives at seq " +
                std::to_string(sts[i].stop_sequence_) +
                " before departing the previous stop");
      }
    }
  }

  if (f.frequencies_.has_value()) {
    for (auto i = std::size_t{0U}; i != f.frequencies_->size(); ++i) {
      auto const& fr = (*f.frequencies_)[i];
      if (!f.trip_idx(fr.trip_id_).has_value()) {
        add(severity::fatal, "frequencies", i + 1U,
            "frequency references unknown trip " + fr.trip_id_);
      }
    }
  }

  if (f.transfers_.has_value()) {
    for (auto i = std::size_t{0U}; i != f.transfers_->size(); ++i) {
      auto const& tr = (*f.transfers_)[i];
      for (auto const* id : {&tr.from_stop_id_, &tr.to_stop_id_}) {
        if (!f.stop_idx(*id).has_value()) {
          add(severity::fatal, "transfers", i + 1U,
              "transfer references unknown stop " + *id);
        }
      }
    }
  }

  return r;
}

}  // namespace gtfs2stn

#include <algorithm>
#include <map>

#include "gtfs2stn/error.h"
#include "gtfs2stn/gtfs/feed.h"

namespace gtfs2stn {

std::set<std::string> active_service_ids(feed const& f, date const d) {
  std::set<std::string> active;
  auto const wd = weekday_index(d);
  auto const day = std::chrono::sys_days{d};
  for (auto const& c : f.calendars_) {
    if (std::chrono::sys_days{c.start_} <= day &&
        day <= std::chrono::sys_days{c.end_} && c.weekdays_[wd]) {
      active.insert(c.service_id_);
    }
  }
  for (auto const& e : f.calendar_exceptions_) {
    if (e.date_ != d) {
      continue;
    }
    if (e.kind_ == exception_kind::added) {
      active.insert(e.service_id_);
    } else {
      active.erase(e.service_id_);
    }
  }
  return active;
}

std::vector<std::string> trips_for_services(
    feed const& f, std::set<std::string> const& services) {
  if (services.empty()) {
    fail(error_code::invalid_argument, "no service ids selected");
  }
  auto const known = f.service_ids();
  for (auto const& s : services) {
    if (!known.contains(s)) {
      fail(error_code::unknown_service_id, s);
    }
  }
  std::vector<std::string> trips;
  for (auto const& t : f.trips_) {
    if (services.contains(t.service_id_)) {
      trips.push_back(t.id_);
    }
  }
  return trips;
}

feed expand_frequencies(feed const& in) {
  if (!in.frequencies_.has_value() || in.frequencies_->empty()) {
    return in;
  }

  // First departures per template trip, in row order, deduplicated.
  std::map<std::uint32_t, std::vector<time_s>> starts;
  for (auto const& fr : *in.frequencies_) {
    auto const idx = in.trip_idx(fr.trip_id_);
    if (!idx.has_value()) {
      fail(error_code::unknown_trip_id, fr.trip_id_);
    }
    auto& s = starts[*idx];
    for (auto t = fr.start_; t < fr.end_; t += fr.headway_) {
      if (std::find(begin(s), end(s), t) == end(s)) {
        s.push_back(t);
      }
    }
  }

  feed out;
  out.agencies_ = in.agencies_;
  out.stops_ = in.stops_;
  out.routes_ = in.routes_;
  out.calendars_ = in.calendars_;
  out.calendar_exceptions_ = in.calendar_exceptions_;
  out.frequencies_ = std::vector<frequency>{};
  out.transfers_ = in.transfers_;
  out.shapes_ = in.shapes_;
  out.load_findings_ = in.load_findings_;

  for (auto t = 0U; t != in.trips_.size(); ++t) {
    auto const& tmpl = in.trips_[t];
    auto const sts = in.trip_stop_times(t);
    auto const it = starts.find(t);
    if (it == end(starts)) {
      out.trips_.push_back(tmpl);
      out.stop_times_.insert(end(out.stop_times_), begin(sts), end(sts));
      continue;
    }
    if (sts.empty()) {
      continue;
    }
    auto const first_dep = sts.front().departure_;
    for (auto const start : it->second) {
      auto clone = tmpl;
      clone.id_ = tmpl.id_ + "@" + std::to_string(start);
      while (in.trip_idx(clone.id_).has_value()) {
        clone.id_ += "'";
      }
      auto const shift = start - first_dep;
      for (auto st : sts) {
        st.trip_id_ = clone.id_;
        st.arrival_ += shift;
        st.departure_ += shift;
        if (st.arrival_ < 0 || st.departure_ >= kMaxServiceTime) {
          fail(error_code::bad_time, "frequency clone " + clone.id_ +
                                         " leaves the two-day horizon");
        }
        out.stop_times_.push_back(std::move(st));
      }
      out.trips_.push_back(std::move(clone));
    }
  }

  auto const orphans = in.orphan_stop_times();
  out.stop_times_.insert(end(out.stop_times_), begin(orphans), end(orphans));
  out.finalize();
  return out;
}

}  // namespace gtfs2stn

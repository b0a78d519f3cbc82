#include "gtfs2stn/gateway/session.h"

#include <random>
#include <sstream>

#include "gtfs2stn/error.h"

namespace gtfs2stn::gateway {

std::string_view to_string(job_phase const p) {
  switch (p) {
    case job_phase::queued: return "queued";
    case job_phase::parsing: return "parsing";
    case job_phase::building: return "building";
    case job_phase::done: return "done";
    case job_phase::failed: return "failed";
  }
  return "?";
}

namespace {

std::string random_token() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex;
  for (auto i = 0; i != 2; ++i) {
    auto const v = rng();
    for (auto shift = 60; shift >= 0; shift -= 4) {
      out << ((v >> shift) & 0xFU);
    }
  }
  return out.str();
}

void cancel_locked(session& s) {
  if (s.cancel_ != nullptr) {
    s.cancel_->store(true);
  }
}

}  // namespace

session_store::session_store(store_config config) : config_{config} {}

session_store::~session_store() {
  {
    auto const lock = std::lock_guard{mutex_};
    for (auto const& [id, s] : sessions_) {
      auto const session_lock = std::lock_guard{s->mutex_};
      cancel_locked(*s);
    }
  }
  auto const lock = std::lock_guard{workers_mutex_};
  for (auto& w : workers_) {
    w.thread_.join();
  }
}

void session_store::sweep_locked(session::clock::time_point const now) {
  for (auto it = begin(sessions_); it != end(sessions_);) {
    auto const session_lock = std::lock_guard{it->second->mutex_};
    if (now - it->second->last_access_ > config_.ttl_) {
      cancel_locked(*it->second);
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::shared_ptr<session> session_store::create() {
  auto const now = session::clock::now();
  auto const lock = std::lock_guard{mutex_};
  sweep_locked(now);
  auto id = random_token();
  while (sessions_.contains(id)) {
    id = random_token();
  }
  auto s = std::make_shared<session>(id, now);
  sessions_.emplace(id, s);
  return s;
}

std::shared_ptr<session> session_store::find(std::string const& id) {
  auto const now = session::clock::now();
  auto const lock = std::lock_guard{mutex_};
  auto const it = sessions_.find(id);
  if (it == end(sessions_)) {
    return nullptr;
  }
  auto const& s = it->second;
  auto const session_lock = std::lock_guard{s->mutex_};
  if (now - s->last_access_ > config_.ttl_) {
    cancel_locked(*s);
    sessions_.erase(it);
    return nullptr;
  }
  s->last_access_ = now;
  return s;
}

bool session_store::remove(std::string const& id) {
  auto const lock = std::lock_guard{mutex_};
  auto const it = sessions_.find(id);
  if (it == end(sessions_)) {
    return false;
  }
  {
    auto const session_lock = std::lock_guard{it->second->mutex_};
    cancel_locked(*it->second);
  }
  sessions_.erase(it);
  return true;
}

std::size_t session_store::size() {
  auto const lock = std::lock_guard{mutex_};
  sweep_locked(session::clock::now());
  return sessions_.size();
}

std::optional<job_status> session_store::job(session const& s,
                                             std::string const& job_id) const {
  auto const lock = std::lock_guard{s.mutex_};
  auto const it = s.jobs_.find(job_id);
  if (it == end(s.jobs_)) {
    return std::nullopt;
  }
  return it->second;
}

bool session_store::cancel(session& s, std::string const& job_id) {
  auto const lock = std::lock_guard{s.mutex_};
  if (s.running_job_ != job_id) {
    return false;
  }
  cancel_locked(s);
  return true;
}

void session_store::wait_idle(session const& s) {
  auto lock = std::unique_lock{s.mutex_};
  s.idle_.wait(
      lock, [&] { return !s.running_job_.has_value(); });
}

void session_store::reap_workers() {
  auto const lock = std::lock_guard{workers_mutex_};
  for (auto it = begin(workers_); it != end(workers_);) {
    if (it->finished_->load()) {
      it->thread_.join();
      it = workers_.erase(it);
    } else {
      ++it;
    }
  }
}

std::optional<job_status> session_store::start(
    std::shared_ptr<session> const& s, job_phase const first_phase,
    work fn) {
  reap_workers();

  job_status status;
  std::shared_ptr<std::atomic<bool>> cancel;
  {
    auto const lock = std::lock_guard{s->mutex_};
    if (s->running_job_.has_value()) {
      return std::nullopt;
    }
    status.id_ = "job-" + std::to_string(next_job_++);
    s->jobs_[status.id_] = status;
    s->running_job_ = status.id_;
    cancel = s->cancel_ = std::make_shared<std::atomic<bool>>(false);
  }

  auto finished = std::make_shared<std::atomic<bool>>(false);
  auto run = [s, cancel, finished, id = status.id_, first_phase,
              fn = std::move(fn)] {
    // Phases only move forward; progress only grows within a phase.
    auto const report = [&](job_phase const phase, double const progress) {
      auto const lock = std::lock_guard{s->mutex_};
      auto& j = s->jobs_[id];
      if (phase < j.phase_) {
        return;
      }
      j.progress_ = phase == j.phase_ ? std::max(j.progress_, progress)
                                      : progress;
      j.phase_ = phase;
    };
    std::string failure;
    try {
      report(first_phase, 0.0);
      fn(*s, *cancel, report);
    } catch (std::exception const& e) {
      failure = e.what();
    }
    {
      auto const lock = std::lock_guard{s->mutex_};
      auto& j = s->jobs_[id];
      if (failure.empty()) {
        j.phase_ = job_phase::done;
        j.progress_ = 1.0;
      } else {
        j.phase_ = job_phase::failed;
        j.message_ = failure;
      }
      s->running_job_.reset();
      s->cancel_.reset();
    }
    s->idle_.notify_all();
    finished->store(true);
  };

  auto const lock = std::lock_guard{workers_mutex_};
  workers_.push_back({finished, std::thread{std::move(run)}});
  return status;
}

std::optional<job_status> session_store::start_upload(
    std::shared_ptr<session> const& s, std::string archive) {
  return start(
      s, job_phase::parsing,
      [archive = std::move(archive)](session& sess,
                                     std::atomic<bool> const& cancel,
                                     auto const& report) {
        auto result = std::make_shared<loaded_feed>();
        result->feed_ = load_feed_from_zip(archive);
        report(job_phase::parsing, 0.5);
        result->report_ = validate(result->feed_);
        if (result->report_.has_fatal()) {
          std::string first;
          for (auto const& f : result->report_.findings_) {
            if (f.severity_ == severity::fatal) {
              first = f.table_ + ": " + f.message_;
              break;
            }
          }
          fail(error_code::invalid_argument,
               "feed failed validation (" + first + ")");
        }
        report(job_phase::parsing, 0.75);
        for (auto const& [name, text] : to_table_files(result->feed_)) {
          result->tables_.emplace(name, parse_csv(text));
        }
        auto const lock = std::lock_guard{sess.mutex_};
        if (cancel.load()) {
          fail(error_code::cancelled, "upload cancelled");
        }
        sess.feed_ = std::move(result);
        sess.network_.reset();
      });
}

std::optional<job_status> session_store::start_build(
    std::shared_ptr<session> const& s, build_config cfg) {
  return start(
      s, job_phase::building,
      [cfg = std::move(cfg)](session& sess, std::atomic<bool> const& cancel,
                             auto const& report) {
        std::shared_ptr<loaded_feed const> f;
        {
          auto const lock = std::lock_guard{sess.mutex_};
          f = sess.feed_;
        }
        if (f == nullptr) {
          fail(error_code::invalid_argument, "no feed uploaded");
        }
        auto const hooks = build_hooks{[&](double const p) {
          report(job_phase::building, p);
          return !cancel.load();
        }};
        auto result = std::make_shared<built_network>(
            built_network{build_network(f->feed_, cfg, hooks), cfg});
        auto const lock = std::lock_guard{sess.mutex_};
        if (cancel.load()) {
          fail(error_code::cancelled, "build cancelled");
        }
        sess.network_ = std::move(result);
      });
}

}  // namespace gtfs2stn::gateway

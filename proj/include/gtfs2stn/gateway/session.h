#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "gtfs2stn/gtfs/csv.h"
#include "gtfs2stn/gtfs/feed.h"
#include "gtfs2stn/network.h"

namespace gtfs2stn::gateway {

enum class job_phase : std::uint8_t { queued, parsing, building, done, failed };

std::string_view to_string(job_phase);

struct job_status {
  std::string id_;
  job_phase phase_{job_phase::queued};
  double progress_{0.0};
  std::string message_;
};

// Feed state published after a successful upload. Table previews are
// parsed once here so paging does not re-read the feed.
struct loaded_feed {
  feed feed_;
  validation_report report_;
  std::map<std::string, csv_table> tables_;
};

struct built_network {
  network network_;
  build_config config_;
};

struct session {
  using clock = std::chrono::steady_clock;

  session(std::string id, clock::time_point const now)
      : id_{std::move(id)}, created_{now}, last_access_{now} {}

  std::string const id_;
  clock::time_point const created_;

  // Everything below is guarded by mutex_. Published state is immutable
  // and shared, so readers hold the lock only to copy the pointers.
  mutable std::mutex mutex_;
  clock::time_point last_access_;
  std::shared_ptr<loaded_feed const> feed_;
  std::shared_ptr<built_network const> network_;  // only with feed_
  std::map<std::string, job_status> jobs_;
  std::optional<std::string> running_job_;
  std::shared_ptr<std::atomic<bool>> cancel_;  // of the running job
  mutable std::condition_variable idle_;
};

struct store_config {
  std::chrono::milliseconds ttl_{std::chrono::hours{1}};
};

// Owns sessions and the worker threads of their jobs. A session expires
// once it has been idle for longer than the TTL; expiry and removal cancel
// its running job.
class session_store {
public:
  explicit session_store(store_config = {});
  ~session_store();

  session_store(session_store const&) = delete;
  session_store& operator=(session_store const&) = delete;

  std::shared_ptr<session> create();

  // nullptr when unknown or expired. Refreshes last access.
  std::shared_ptr<session> find(std::string const& id);

  bool remove(std::string const& id);

  // Starts an upload job parsing a zip archive. nullopt when the session
  // already runs a job.
  std::optional<job_status> start_upload(std::shared_ptr<session> const&,
                                         std::string archive);

  // Starts a network build over the session's feed. nullopt when a job is
  // running. The caller checks that a feed exists.
  std::optional<job_status> start_build(std::shared_ptr<session> const&,
                                        build_config);

  std::optional<job_status> job(session const&, std::string const& job_id) const;

  // Requests cancellation of the session's running job.
  bool cancel(session&, std::string const& job_id);

  // Blocks until the session has no running job. For tests and shutdown.
  void wait_idle(session const&);

  std::size_t size();

private:
  using work = std::function<void(session&, std::atomic<bool> const& cancel,
                                  std::function<void(job_phase, double)>)>;

  std::optional<job_status> start(std::shared_ptr<session> const&,
                                  job_phase, work);
  void sweep_locked(session::clock::time_point now);
  void reap_workers();

  store_config config_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<session>> sessions_;

  struct worker {
    std::shared_ptr<std::atomic<bool>> finished_;
    std::thread thread_;
  };
  std::mutex workers_mutex_;
  std::list<worker> workers_;
  std::atomic<std::uint64_t> next_job_{1U};
};

}  // namespace gtfs2stn::gateway

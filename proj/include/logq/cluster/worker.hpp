// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "logq/cluster/net.hpp"
#include "logq/common/thread_pool.hpp"
#include "logq/engine/hash_index.hpp"

namespace logq::cluster {

struct WorkerConfig {
  std::string coordinator;  // host:port
  std::uint32_t cores = 1;
  std::filesystem::path data_root = ".";
  // Empty picks <hostname>-<pid>-<n>.
  std::string worker_id;
  std::chrono::milliseconds heartbeat_interval{2000};
  // Reconnect attempts after losing (or failing to reach) the coordinator.
  int max_retries = 5;
  std::chrono::milliseconds initial_backoff{200};
};

// Holds assigned partitions, cached or disk-backed, and runs plan fragments
// for the coordinator. State is dropped whenever the connection is lost.
class Worker {
 public:
  explicit Worker(WorkerConfig config);
  ~Worker();
  Worker(const Worker&) = delete;
  Worker& operator=(const Worker&) = delete;

  // Serves until Shutdown or stop(). Returns 0 then; 1 when registration is
  // refused or the coordinator stays unreachable after the retries.
  int run();
  // run() on a background thread; wait() joins it and returns its code.
  void start();
  int wait();
  void stop();

  const std::string& id() const { return id_; }
  bool registered() const { return registered_.load(); }
  // Rows parsed from CSV sources since start: caching, DiskStream fragments
  // and DiskStream build sides.
  std::uint64_t disk_rows() const { return disk_rows_.load(); }
  std::vector<std::string> cached_tables() const;

 private:
  struct TableState {
    catalog::TableRef handle;  // only this worker's partitions, by id
    std::map<std::size_t, std::size_t> slot_of;  // partition id -> index
    bool complete = false;  // every partition present (broadcast)
    mutable std::mutex index_mu;
    mutable std::map<std::size_t, std::shared_ptr<const engine::HashIndex>> indexes;
  };
  using StateRef = std::shared_ptr<const TableState>;

  enum class Outcome { kLost, kShutdown, kRefused };
  Outcome session(const std::shared_ptr<Connection>& conn);
  void handle(const std::shared_ptr<Connection>& conn, WireMessage message, bool& shutdown);
  void handle_exec(const std::shared_ptr<Connection>& conn, const Exec& exec);
  std::shared_ptr<const engine::HashIndex> build_index(const StateRef& build,
                                                       std::size_t key,
                                                       engine::StorageMode mode,
                                                       std::uint64_t& disk_rows);
  StateRef find(const std::string& table) const;
  void install(const std::string& table, std::shared_ptr<TableState> state);
  bool sleep_for(std::chrono::milliseconds delay);

  WorkerConfig config_;
  std::string id_;

  mutable std::shared_mutex tables_mu_;
  std::map<std::string, StateRef> tables_;

  std::atomic<bool> stopping_{false};
  std::atomic<bool> registered_{false};
  std::atomic<std::uint64_t> disk_rows_{0};

  std::mutex conn_mu_;
  std::shared_ptr<Connection> conn_;
  std::condition_variable stop_cv_;

  std::thread runner_;
  int exit_code_ = 0;
  // Last, so queued fragments finish before the rest is torn down.
  ThreadPool pool_;
};

}  // namespace logq::cluster

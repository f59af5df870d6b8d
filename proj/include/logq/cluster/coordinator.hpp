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
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"

#include "logq/catalog/catalog.hpp"
#include "logq/cluster/net.hpp"
#include "logq/common/thread_pool.hpp"
#include "logq/engine/plan.hpp"
#include "logq/engine/result.hpp"

namespace logq::cluster {

struct CoordinatorConfig {
  std::string listen = "127.0.0.1:0";
  // Where the coordinator reads sources to split, count and broadcast.
  std::filesystem::path data_root = ".";
  std::chrono::milliseconds heartbeat_interval{2000};
  std::chrono::milliseconds query_timeout{60000};
  // Bound on a single AssignLoad/Broadcast/Cache round trip.
  std::chrono::milliseconds control_timeout{600000};
  std::uint64_t partition_bytes = catalog::kDefaultPartitionBytes;
  // Tables at or under plan.broadcast_threshold_bytes are shipped whole to
  // every worker, which is what lets any of them serve as a join build side.
  engine::PlanOptions plan;
  engine::StorageMode default_mode = engine::StorageMode::kCached;
};

// Parses, plans and merges on one process; workers hold the data.
class Coordinator {
 public:
  explicit Coordinator(CoordinatorConfig config);
  ~Coordinator();
  Coordinator(const Coordinator&) = delete;
  Coordinator& operator=(const Coordinator&) = delete;

  // Binds and starts accepting; throws Error(kIo) on bind failure.
  void start();
  void stop();
  std::uint16_t port() const;
  // host:port workers and clients should dial.
  std::string address() const;

  // Blocks until at least `count` workers are alive; returns the number
  // alive when it gave up or succeeded.
  std::size_t wait_for_workers(std::size_t count, std::chrono::milliseconds timeout);
  std::size_t alive_workers() const;

  // Reads <data root>/source, registers it as `table` and distributes it
  // across the alive workers. A missing schema means a builtin table.
  void load_table(const std::string& table, const std::string& source,
                  std::optional<catalog::TableSchema> schema = std::nullopt, bool cache = true);
  void cache_table(const std::string& table);

  engine::QueryResult submit(std::string_view sql,
                             std::optional<engine::StorageMode> mode = std::nullopt);

  nlohmann::json status() const;
  // worker id -> partition ids of `table` it holds, in registration order.
  // Every holder of a broadcast table holds all of its partitions.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> assignment(
      const std::string& table) const;
  // Exec messages sent since start.
  std::uint64_t dispatch_count() const { return dispatches_.load(); }
  // Affects tables loaded and queries submitted afterwards.
  void set_plan_options(const engine::PlanOptions& options);
  engine::PlanOptions plan_options() const;

 private:
  struct Session;
  struct QueryState;
  struct Distribution;
  using SessionRef = std::shared_ptr<Session>;

  void accept_loop();
  void serve_connection(std::shared_ptr<Connection> conn);
  void serve_worker(const std::shared_ptr<Connection>& conn, const Register& reg);
  void serve_client(const std::shared_ptr<Connection>& conn, WireMessage first);
  void on_worker_message(const SessionRef& session, WireMessage message);
  void drop_session(const SessionRef& session, const std::string& reason);
  void monitor_loop();
  void reap_threads(bool all);

  std::vector<SessionRef> live_sessions() const;
  SessionRef session_by_serial(std::uint64_t serial) const;
  void control(const SessionRef& session, const WireMessage& message, std::uint64_t seq);
  void distribute(catalog::TableRef table);

  CoordinatorConfig config_;
  std::unique_ptr<Listener> listener_;
  std::string advertised_;
  ThreadPool load_pool_;

  mutable std::mutex mu_;  // sessions_, distributions_, catalog changes
  std::vector<SessionRef> sessions_;
  std::map<std::string, std::shared_ptr<const Distribution>> distributions_;
  catalog::Catalog catalog_;
  std::mutex load_mu_;  // one distribution at a time

  mutable std::mutex queries_mu_;
  std::map<std::uint64_t, std::shared_ptr<QueryState>> inflight_;

  std::atomic<std::uint64_t> next_serial_{1};
  std::atomic<std::uint64_t> next_query_{1};
  std::atomic<std::uint64_t> next_seq_{1};
  std::atomic<std::uint64_t> dispatches_{0};
  std::atomic<bool> running_{false};

  std::mutex threads_mu_;
  struct Tracked {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
    std::shared_ptr<Connection> conn;
  };
  std::list<Tracked> threads_;
  std::thread acceptor_;
  std::thread monitor_;
  std::mutex monitor_mu_;
  std::condition_variable monitor_cv_;
};

}  // namespace logq::cluster

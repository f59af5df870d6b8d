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

#include "logq/cluster/worker.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>

#include "logq/cluster/source_path.hpp"
#include "logq/common/log.hpp"
#include "logq/engine/fragment.hpp"

namespace logq::cluster {

namespace {

std::string default_worker_id() {
  static std::atomic<int> counter{0};
  char host[256] = {};
  if (::gethostname(host, sizeof host - 1) != 0) std::snprintf(host, sizeof host, "worker");
  return std::string(host) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
}

void send_quietly(Connection& conn, const WireMessage& message) {
  try {
    conn.send(message);
  } catch (const Error& e) {
    log_debug("worker", std::string("dropped reply: ") + e.what());
  }
}

std::vector<catalog::PartitionDescriptor> descriptors(const std::vector<RangeAssignment>& ranges,
                                                      std::uint64_t source_size) {
  std::vector<catalog::PartitionDescriptor> out;
  for (const auto& r : ranges) {
    if (r.range.end() > source_size) {
      throw Error(ErrorCode::kIo, "partition " + std::to_string(r.partition_id) +
                                      " extends past the end of the source");
    }
    out.push_back({r.partition_id, r.range, r.row_count});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.partition_id < b.partition_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].partition_id == out[i - 1].partition_id) {
      throw Error(ErrorCode::kProtocol, "partition " + std::to_string(out[i].partition_id) +
                                            " assigned twice");
    }
  }
  return out;
}

}  // namespace

Worker::Worker(WorkerConfig config)
    : config_(std::move(config)),
      id_(config_.worker_id.empty() ? default_worker_id() : config_.worker_id),
      pool_(std::max<std::uint32_t>(config_.cores, 1)) {}

Worker::~Worker() {
  stop();
  if (runner_.joinable()) runner_.join();
}

void Worker::start() {
  runner_ = std::thread([this] { exit_code_ = run(); });
}

int Worker::wait() {
  if (runner_.joinable()) runner_.join();
  return exit_code_;
}

void Worker::stop() {
  stopping_.store(true);
  std::lock_guard lock(conn_mu_);
  if (conn_) conn_->shutdown();
  stop_cv_.notify_all();
}

bool Worker::sleep_for(std::chrono::milliseconds delay) {
  std::unique_lock lock(conn_mu_);
  return !stop_cv_.wait_for(lock, delay, [this] { return stopping_.load(); });
}

std::vector<std::string> Worker::cached_tables() const {
  std::shared_lock lock(tables_mu_);
  std::vector<std::string> out;
  for (const auto& [name, state] : tables_) {
    if (state->handle->cached) out.push_back(name);
  }
  return out;
}

Worker::StateRef Worker::find(const std::string& table) const {
  std::shared_lock lock(tables_mu_);
  auto it = tables_.find(table);
  return it == tables_.end() ? nullptr : it->second;
}

void Worker::install(const std::string& table, std::shared_ptr<TableState> state) {
  state->slot_of.clear();
  for (std::size_t i = 0; i < state->handle->partitions.size(); ++i) {
    state->slot_of[state->handle->partitions[i].partition_id] = i;
  }
  std::unique_lock lock(tables_mu_);
  tables_[table] = std::move(state);
}

int Worker::run() {
  const HostPort target = parse_host_port(config_.coordinator);
  int failures = 0;
  auto backoff = config_.initial_backoff;
  while (!stopping_.load()) {
    std::shared_ptr<Connection> conn;
    try {
      conn = connect_to(target);
    } catch (const Error& e) {
      if (++failures > config_.max_retries) {
        log_info("worker", id_ + ": giving up on " + target.str() + ": " + e.what());
        return 1;
      }
      log_debug("worker", id_ + ": " + e.what() + ", retrying");
      if (!sleep_for(backoff)) break;
      backoff = std::min(backoff * 2, std::chrono::milliseconds(5000));
      continue;
    }
    {
      std::lock_guard lock(conn_mu_);
      conn_ = conn;
      if (stopping_.load()) conn->shutdown();
    }
    Outcome outcome = session(conn);
    {
      std::lock_guard lock(conn_mu_);
      conn_.reset();
    }
    registered_.store(false);
    {
      std::unique_lock lock(tables_mu_);
      tables_.clear();
    }
    if (outcome == Outcome::kRefused) return 1;
    if (outcome == Outcome::kShutdown) return 0;
    if (stopping_.load()) break;
    // Connection lost after a successful registration: start the retry
    // budget over.
    failures = 0;
    backoff = config_.initial_backoff;
    log_info("worker", id_ + ": lost coordinator, reconnecting");
  }
  return 0;
}

Worker::Outcome Worker::session(const std::shared_ptr<Connection>& conn) {
  try {
    conn->send(Register{id_, conn->local_address(), config_.cores});
    auto reply = conn->receive();
    if (!reply) return Outcome::kLost;
    if (const auto* err = std::get_if<Err>(&*reply)) {
      log_info("worker", id_ + ": registration refused: " + err->message);
      return Outcome::kRefused;
    }
    if (!std::holds_alternative<Ack>(*reply)) {
      log_info("worker", id_ + ": unexpected " + std::string(kind_name(*reply)) + " during registration");
      return Outcome::kRefused;
    }
  } catch (const Error& e) {
    log_debug("worker", id_ + ": " + e.what());
    return Outcome::kLost;
  }
  registered_.store(true);
  log_info("worker", id_ + ": registered with " + config_.coordinator);

  std::mutex hb_mu;
  std::condition_variable hb_cv;
  bool hb_done = false;
  std::thread heartbeat([&] {
    std::unique_lock lock(hb_mu);
    while (!hb_cv.wait_for(lock, config_.heartbeat_interval, [&] { return hb_done; })) {
      try {
        conn->send(Heartbeat{});
      } catch (const Error&) {
        return;
      }
    }
  });

  bool shutdown = false;
  try {
    while (!shutdown) {
      auto message = conn->receive();
      if (!message) break;
      handle(conn, std::move(*message), shutdown);
    }
  } catch (const Error& e) {
    log_debug("worker", id_ + ": " + e.what());
  }
  {
    std::lock_guard lock(hb_mu);
    hb_done = true;
  }
  hb_cv.notify_all();
  heartbeat.join();
  conn->shutdown();
  return shutdown ? Outcome::kShutdown : Outcome::kLost;
}

void Worker::handle(const std::shared_ptr<Connection>& conn, WireMessage message, bool& shutdown) {
  std::uint64_t seq = 0;
  try {
    if (auto* m = std::get_if<AssignLoad>(&message)) {
      seq = m->seq;
      auto source = std::make_shared<catalog::FileSource>(source_path(config_.data_root, m->source));
      auto handle = std::make_shared<catalog::TableHandle>();
      handle->schema = m->schema;
      handle->partitions = descriptors(m->partitions, source->size());
      handle->source = std::move(source);
      for (const auto& d : handle->partitions) {
        handle->total_rows += d.row_count;
        handle->total_bytes += d.range.length;
      }
      auto state = std::make_shared<TableState>();
      state->handle = std::move(handle);
      install(m->table, std::move(state));
      conn->send(Ack{seq, "loaded " + std::to_string(m->partitions.size()) + " partitions"});
    } else if (auto* m = std::get_if<Broadcast>(&message)) {
      seq = m->seq;
      auto source = std::make_shared<catalog::MemorySource>(std::move(m->content),
                                                            "broadcast " + m->table);
      auto handle = std::make_shared<catalog::TableHandle>();
      handle->schema = m->schema;
      handle->partitions = descriptors(m->partitions, source->size());
      handle->source = std::move(source);
      for (const auto& d : handle->partitions) {
        handle->total_rows += d.row_count;
        handle->total_bytes += d.range.length;
      }
      auto state = std::make_shared<TableState>();
      state->handle = std::move(handle);
      state->complete = true;
      install(m->table, std::move(state));
      conn->send(Ack{seq, "broadcast received"});
    } else if (auto* m = std::get_if<Cache>(&message)) {
      seq = m->seq;
      StateRef current = find(m->table);
      if (!current) throw Error(ErrorCode::kUnknownTable, "table " + m->table + " is not loaded");
      if (!current->handle->cached) {
        catalog::TableRef cached;
        try {
          cached = catalog::materialize(current->handle, &pool_);
        } catch (const std::bad_alloc&) {
          throw Error(ErrorCode::kOutOfMemory, "not enough memory to cache " + m->table);
        }
        disk_rows_ += cached->total_rows;
        auto state = std::make_shared<TableState>();
        state->handle = std::move(cached);
        state->complete = current->complete;
        install(m->table, std::move(state));
      }
      conn->send(Ack{seq, "cached " + m->table});
    } else if (auto* m = std::get_if<Exec>(&message)) {
      auto exec = std::make_shared<Exec>(std::move(*m));
      pool_.submit([this, conn, exec] { handle_exec(conn, *exec); });
    } else if (std::holds_alternative<Shutdown>(message)) {
      shutdown = true;
    } else if (std::holds_alternative<Heartbeat>(message)) {
      // Coordinator-side keepalive; nothing to do.
    } else {
      throw Error(ErrorCode::kProtocol,
                  "unexpected " + std::string(kind_name(message)) + " on a worker connection");
    }
  } catch (const Error& e) {
    send_quietly(*conn, Err{0, seq, e.code(), e.what(), std::nullopt, e.position()});
  }
}

std::shared_ptr<const engine::HashIndex> Worker::build_index(const StateRef& build, std::size_t key,
                                                             engine::StorageMode mode,
                                                             std::uint64_t& disk_rows) {
  if (mode == engine::StorageMode::kDiskStream) {
    auto uncached = std::make_shared<catalog::TableHandle>(*build->handle);
    uncached->cached = false;
    uncached->resident.clear();
    auto fresh = catalog::materialize(uncached, nullptr);
    disk_rows += fresh->total_rows;
    return std::make_shared<const engine::HashIndex>(fresh->resident, key);
  }
  std::lock_guard lock(build->index_mu);
  auto& slot = build->indexes[key];
  if (!slot) {
    slot = std::make_shared<const engine::HashIndex>(engine::build_hash_index(*build->handle, key));
  }
  return slot;
}

void Worker::handle_exec(const std::shared_ptr<Connection>& conn, const Exec& exec) {
  const auto& plan = exec.plan;
  auto fail_all = [&](const std::vector<std::size_t>& ids, ErrorCode code, const std::string& msg) {
    for (std::size_t id : ids) send_quietly(*conn, Err{exec.query_id, 0, code, msg, id, std::nullopt});
  };

  StateRef scan = find(plan.scan_table);
  if (!scan) {
    fail_all(exec.partitions, ErrorCode::kProtocol, "table " + plan.scan_table + " is not loaded here");
    return;
  }
  std::vector<std::size_t> owned;
  for (std::size_t id : exec.partitions) {
    if (scan->slot_of.count(id) == 0) {
      send_quietly(*conn, Err{exec.query_id, 0, ErrorCode::kProtocol,
                              "partition " + std::to_string(id) + " of " + plan.scan_table +
                                  " is not assigned to " + id_,
                              id, std::nullopt});
    } else {
      owned.push_back(id);
    }
  }
  if (owned.empty()) return;

  if (scan->handle->schema.width() != plan.scan_width) {
    fail_all(owned, ErrorCode::kProtocol, "plan width does not match table " + plan.scan_table);
    return;
  }
  const bool cached_mode = plan.mode == engine::StorageMode::kCached;
  if (cached_mode && !scan->handle->cached) {
    fail_all(owned, ErrorCode::kNotCached, "table " + plan.scan_table + " is not cached on " + id_);
    return;
  }

  std::uint64_t build_disk_rows = 0;
  std::shared_ptr<const engine::HashIndex> index;
  if (plan.join) {
    StateRef build = find(plan.join->build_table);
    if (!build || !build->complete) {
      fail_all(owned, ErrorCode::kProtocol,
               "join table " + plan.join->build_table + " was not broadcast to " + id_);
      return;
    }
    if (cached_mode && !build->handle->cached) {
      fail_all(owned, ErrorCode::kNotCached,
               "table " + plan.join->build_table + " is not cached on " + id_);
      return;
    }
    try {
      index = build_index(build, plan.join->build_key, plan.mode, build_disk_rows);
    } catch (const Error& e) {
      fail_all(owned, e.code(), e.what());
      return;
    }
    disk_rows_ += build_disk_rows;
  }

  for (std::size_t i = 0; i < owned.size(); ++i) {
    const std::uint64_t extra_disk = i == 0 ? build_disk_rows : 0;
    pool_.submit([this, conn, scan, index, extra_disk, id = owned[i], qid = exec.query_id,
                  plan_copy = std::make_shared<engine::PhysicalPlan>(plan)] {
      const auto& h = *scan->handle;
      const std::size_t slot = scan->slot_of.at(id);
      try {
        engine::FragmentInput input =
            plan_copy->mode == engine::StorageMode::kCached
                ? engine::FragmentInput::cached(h.resident[slot])
                : engine::FragmentInput::disk(*h.source, h.partitions[slot], h.schema);
        auto result = engine::execute_fragment(*plan_copy, input, index.get(), qid);
        disk_rows_ += result.disk_rows;
        result.disk_rows += extra_disk;
        send_quietly(*conn, Fragment{std::move(result)});
      } catch (const Error& e) {
        send_quietly(*conn, Err{qid, 0, e.code(), e.what(), id, std::nullopt});
      } catch (const std::bad_alloc&) {
        send_quietly(*conn, Err{qid, 0, ErrorCode::kOutOfMemory, "out of memory", id, std::nullopt});
      } catch (const std::exception& e) {
        send_quietly(*conn, Err{qid, 0, ErrorCode::kInternal, e.what(), id, std::nullopt});
      }
    });
  }
}

}  // namespace logq::cluster

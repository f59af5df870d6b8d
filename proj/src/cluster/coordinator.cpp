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

#include "logq/cluster/coordinator.hpp"

#include <algorithm>
#include <future>

#include "logq/cluster/source_path.hpp"
#include "logq/common/log.hpp"
#include "logq/sql/parser.hpp"
#include "logq/sql/resolver.hpp"

namespace logq::cluster {

using Clock = std::chrono::steady_clock;

struct Coordinator::Session {
  std::uint64_t serial = 0;
  std::string id;
  std::string address;
  std::uint32_t cores = 1;
  std::shared_ptr<Connection> conn;
  std::atomic<Clock::rep> last_heartbeat{0};
  std::atomic<bool> alive{true};

  std::mutex mu;
  bool closed = false;
  std::map<std::uint64_t, std::shared_ptr<std::promise<std::optional<Err>>>> pending;
  std::set<std::string> cached;
  std::set<std::uint64_t> running;

  void touch() { last_heartbeat.store(Clock::now().time_since_epoch().count()); }
};

struct Coordinator::Distribution {
  catalog::TableRef table;
  std::string source;
  bool broadcast = false;
  bool cached = false;
  std::vector<std::uint64_t> owner;  // session serial per partition id
  std::vector<std::uint64_t> holders;
};

struct Coordinator::QueryState {
  std::uint64_t id = 0;
  std::mutex mu;
  std::condition_variable cv;
  std::set<std::size_t> pending;
  std::vector<engine::FragmentResult> fragments;
  std::optional<std::pair<ErrorCode, std::string>> error;
  std::set<std::uint64_t> sessions;

  void fail(ErrorCode code, std::string message) {
    {
      std::lock_guard lock(mu);
      if (!error) error.emplace(code, std::move(message));
    }
    cv.notify_all();
  }
};

namespace {

std::string join_ids(const std::set<std::size_t>& ids) {
  std::string out;
  for (std::size_t id : ids) {
    if (!out.empty()) out += ", ";
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

Coordinator::Coordinator(CoordinatorConfig config)
    : config_(std::move(config)), load_pool_(default_parallelism()) {}

Coordinator::~Coordinator() { stop(); }

void Coordinator::start() {
  const HostPort listen = parse_host_port(config_.listen);
  listener_ = std::make_unique<Listener>(listen);
  const std::string host =
      listen.host.empty() || listen.host == "0.0.0.0" ? "127.0.0.1" : listen.host;
  advertised_ = host + ":" + std::to_string(listener_->port());
  running_.store(true);
  acceptor_ = std::thread([this] { accept_loop(); });
  monitor_ = std::thread([this] { monitor_loop(); });
  log_info("coordinator", "listening on " + listener_->host() + ":" +
                              std::to_string(listener_->port()));
}

void Coordinator::stop() {
  if (!running_.exchange(false)) return;
  for (const auto& s : live_sessions()) {
    try {
      s->conn->send(Shutdown{});
    } catch (const Error&) {
    }
  }
  listener_->close();
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard lock(monitor_mu_);
  }
  monitor_cv_.notify_all();
  if (monitor_.joinable()) monitor_.join();
  {
    std::lock_guard lock(threads_mu_);
    for (auto& t : threads_) t.conn->shutdown();
  }
  reap_threads(true);
}

std::uint16_t Coordinator::port() const { return listener_ ? listener_->port() : 0; }

std::string Coordinator::address() const { return advertised_; }

void Coordinator::accept_loop() {
  while (running_.load()) {
    auto socket = listener_->accept();
    if (!socket) break;
    if (!running_.load()) break;
    auto conn = std::make_shared<Connection>(std::move(*socket));
    auto done = std::make_shared<std::atomic<bool>>(false);
    std::lock_guard lock(threads_mu_);
    threads_.push_back({std::thread([this, conn, done] {
                          serve_connection(conn);
                          done->store(true);
                        }),
                        done, conn});
    for (auto it = threads_.begin(); it != threads_.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = threads_.erase(it);
      } else {
        ++it;
      }
    }
  }
}

void Coordinator::reap_threads(bool all) {
  std::list<Tracked> finished;
  {
    std::lock_guard lock(threads_mu_);
    for (auto it = threads_.begin(); it != threads_.end();) {
      if (all || it->done->load()) {
        auto next = std::next(it);
        finished.splice(finished.end(), threads_, it);
        it = next;
      } else {
        ++it;
      }
    }
  }
  for (auto& t : finished) t.thread.join();
}

void Coordinator::monitor_loop() {
  const auto limit = config_.heartbeat_interval * 3;
  std::unique_lock lock(monitor_mu_);
  while (running_.load()) {
    monitor_cv_.wait_for(lock, config_.heartbeat_interval / 2);
    if (!running_.load()) break;
    const auto now = Clock::now().time_since_epoch().count();
    for (const auto& s : live_sessions()) {
      Clock::duration silent(now - s->last_heartbeat.load());
      if (silent > limit && s->alive.exchange(false)) {
        log_info("coordinator", "worker " + s->id + " missed 3 heartbeats, marking dead");
        s->conn->shutdown();
      }
    }
  }
}

void Coordinator::serve_connection(std::shared_ptr<Connection> conn) {
  std::optional<WireMessage> first;
  try {
    first = conn->receive();
  } catch (const Error& e) {
    log_debug("coordinator", std::string("bad first frame: ") + e.what());
    return;
  }
  if (!first) return;
  if (const auto* reg = std::get_if<Register>(&*first)) {
    serve_worker(conn, *reg);
  } else {
    serve_client(conn, std::move(*first));
  }
}

void Coordinator::serve_worker(const std::shared_ptr<Connection>& conn, const Register& reg) {
  auto session = std::make_shared<Session>();
  session->serial = next_serial_++;
  session->id = reg.worker_id;
  session->address = reg.address;
  session->cores = std::max<std::uint32_t>(reg.cores, 1);
  session->conn = conn;
  session->touch();

  SessionRef stale;
  {
    std::lock_guard lock(mu_);
    for (const auto& s : sessions_) {
      if (s->id != reg.worker_id) continue;
      if (s->alive.load()) {
        try {
          conn->send(Err{0, 0, ErrorCode::kBadRequest,
                         "worker id " + reg.worker_id + " is already registered", std::nullopt,
                         std::nullopt});
        } catch (const Error&) {
        }
        log_info("coordinator", "refused duplicate worker id " + reg.worker_id);
        return;
      }
      stale = s;
    }
    sessions_.push_back(session);
  }
  if (stale) drop_session(stale, "replaced by a new registration");
  try {
    conn->send(Ack{0, "registered"});
  } catch (const Error& e) {
    drop_session(session, e.what());
    return;
  }
  log_info("coordinator", "worker " + reg.worker_id + " registered with " +
                              std::to_string(session->cores) + " cores");

  std::string reason = "connection closed";
  try {
    while (auto message = conn->receive()) {
      session->touch();
      on_worker_message(session, std::move(*message));
    }
  } catch (const Error& e) {
    reason = e.what();
  }
  drop_session(session, reason);
}

void Coordinator::on_worker_message(const SessionRef& session, WireMessage message) {
  auto route_query = [this](std::uint64_t query_id) -> std::shared_ptr<QueryState> {
    std::lock_guard lock(queries_mu_);
    auto it = inflight_.find(query_id);
    return it == inflight_.end() ? nullptr : it->second;
  };
  auto settle = [&](std::uint64_t seq, std::optional<Err> err) {
    std::shared_ptr<std::promise<std::optional<Err>>> promise;
    {
      std::lock_guard lock(session->mu);
      auto it = session->pending.find(seq);
      if (it == session->pending.end()) return;
      promise = it->second;
      session->pending.erase(it);
    }
    promise->set_value(std::move(err));
  };

  if (std::holds_alternative<Heartbeat>(message)) return;
  if (auto* ack = std::get_if<Ack>(&message)) {
    settle(ack->seq, std::nullopt);
  } else if (auto* err = std::get_if<Err>(&message)) {
    if (err->seq != 0) {
      settle(err->seq, *err);
    } else if (auto q = route_query(err->query_id)) {
      std::string where = err->partition_id ? " (partition " + std::to_string(*err->partition_id) + ")"
                                            : std::string();
      q->fail(err->code, "worker " + session->id + where + ": " + err->message);
    }
  } else if (auto* frag = std::get_if<Fragment>(&message)) {
    if (auto q = route_query(frag->result.query_id)) {
      {
        std::lock_guard lock(q->mu);
        if (q->error) return;
        if (q->pending.erase(frag->result.partition_id) == 0) {
          q->error.emplace(ErrorCode::kProtocol,
                           "worker " + session->id + " sent an unexpected fragment for partition " +
                               std::to_string(frag->result.partition_id));
        } else {
          q->fragments.push_back(std::move(frag->result));
        }
      }
      q->cv.notify_all();
    }
  } else {
    log_info("coordinator", "worker " + session->id + " sent unexpected " +
                                std::string(kind_name(message)));
  }
}

void Coordinator::drop_session(const SessionRef& session, const std::string& reason) {
  session->alive.store(false);
  bool removed = false;
  {
    std::lock_guard lock(mu_);
    auto it = std::find(sessions_.begin(), sessions_.end(), session);
    if (it != sessions_.end()) {
      sessions_.erase(it);
      removed = true;
    }
  }
  session->conn->shutdown();
  std::map<std::uint64_t, std::shared_ptr<std::promise<std::optional<Err>>>> pending;
  {
    std::lock_guard lock(session->mu);
    session->closed = true;
    pending.swap(session->pending);
  }
  for (auto& [seq, promise] : pending) {
    promise->set_value(Err{0, seq, ErrorCode::kIo, "worker disconnected", std::nullopt, std::nullopt});
  }
  std::vector<std::shared_ptr<QueryState>> affected;
  {
    std::lock_guard lock(queries_mu_);
    for (const auto& [id, q] : inflight_) {
      if (q->sessions.count(session->serial) != 0) affected.push_back(q);
    }
  }
  for (const auto& q : affected) {
    q->fail(ErrorCode::kIncomplete, "worker " + session->id + " disconnected: " + reason);
  }
  if (removed) log_info("coordinator", "worker " + session->id + " left: " + reason);
}

std::vector<Coordinator::SessionRef> Coordinator::live_sessions() const {
  std::lock_guard lock(mu_);
  std::vector<SessionRef> out;
  for (const auto& s : sessions_) {
    if (s->alive.load()) out.push_back(s);
  }
  return out;
}

Coordinator::SessionRef Coordinator::session_by_serial(std::uint64_t serial) const {
  std::lock_guard lock(mu_);
  for (const auto& s : sessions_) {
    if (s->serial == serial && s->alive.load()) return s;
  }
  return nullptr;
}

std::size_t Coordinator::alive_workers() const { return live_sessions().size(); }

std::size_t Coordinator::wait_for_workers(std::size_t count, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    std::size_t n = alive_workers();
    if (n >= count || Clock::now() >= deadline) return n;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

void Coordinator::control(const SessionRef& session, const WireMessage& message, std::uint64_t seq) {
  auto promise = std::make_shared<std::promise<std::optional<Err>>>();
  auto future = promise->get_future();
  {
    std::lock_guard lock(session->mu);
    if (session->closed) throw Error(ErrorCode::kIo, "worker " + session->id + " disconnected");
    session->pending[seq] = promise;
  }
  session->conn->send(message);
  if (future.wait_for(config_.control_timeout) != std::future_status::ready) {
    std::lock_guard lock(session->mu);
    session->pending.erase(seq);
    throw Error(ErrorCode::kTimeout, "worker " + session->id + " did not answer " +
                                         std::string(kind_name(message)));
  }
  if (auto err = future.get()) {
    throw Error(err->code, "worker " + session->id + ": " + err->message);
  }
}

void Coordinator::load_table(const std::string& table, const std::string& source,
                             std::optional<catalog::TableSchema> schema, bool cache) {
  if (!schema) {
    auto [tfile, tmsg] = catalog::builtin_schemas();
    if (table == tfile.name()) {
      schema = tfile;
    } else if (table == tmsg.name()) {
      schema = tmsg;
    } else {
      throw Error(ErrorCode::kBadRequest, "no builtin schema for table " + table);
    }
  }
  if (schema->name() != table) {
    throw Error(ErrorCode::kBadRequest, "schema names table " + schema->name() + ", not " + table);
  }
  const auto path = source_path(config_.data_root, source);
  std::lock_guard guard(load_mu_);
  auto handle = std::make_shared<const catalog::TableHandle>(
      catalog::load_table(path, *schema, config_.partition_bytes, &load_pool_));

  auto sessions = live_sessions();
  if (sessions.empty()) throw Error(ErrorCode::kNoWorkers, "no alive workers to load " + table);

  auto dist = std::make_shared<Distribution>();
  dist->table = handle;
  dist->source = source;
  dist->broadcast = handle->total_bytes <= plan_options().broadcast_threshold_bytes;
  for (std::size_t i = 0; i < handle->partitions.size(); ++i) {
    dist->owner.push_back(sessions[i % sessions.size()]->serial);
  }
  std::string content;
  if (dist->broadcast) {
    content.resize(handle->source->size());
    handle->source->read(0, content);
  }

  // Send everything first so workers load in parallel, then collect.
  std::vector<std::pair<SessionRef, std::future<void>>> waits;
  for (const auto& s : sessions) {
    std::vector<RangeAssignment> ranges;
    for (const auto& d : handle->partitions) {
      if (dist->broadcast || dist->owner[d.partition_id] == s->serial) {
        ranges.push_back({d.partition_id, d.range, d.row_count});
      }
    }
    const std::uint64_t seq = next_seq_++;
    WireMessage msg = dist->broadcast
                          ? WireMessage(Broadcast{seq, table, *schema, content, std::move(ranges)})
                          : WireMessage(AssignLoad{seq, table, *schema, source, std::move(ranges)});
    waits.emplace_back(s, std::async(std::launch::async, [this, s, msg = std::move(msg), seq] {
                         control(s, msg, seq);
                       }));
    dist->holders.push_back(s->serial);
  }
  std::optional<Error> failure;
  for (auto& [s, f] : waits) {
    try {
      f.get();
    } catch (const Error& e) {
      if (!failure) failure.emplace(ErrorCode::kIncomplete, "loading " + table + " aborted: " + e.what());
    }
  }
  if (failure) {
    std::lock_guard lock(mu_);
    distributions_.erase(table);
    catalog_.drop_table(table);
    throw *failure;
  }
  {
    std::lock_guard lock(mu_);
    catalog_.replace_table(*handle);
    distributions_[table] = dist;
  }
  for (const auto& s : sessions) {
    std::lock_guard lock(s->mu);
    s->cached.erase(table);
  }
  log_info("coordinator", "loaded " + table + ": " + std::to_string(handle->total_rows) + " rows in " +
                              std::to_string(handle->partitions.size()) + " partitions, " +
                              (dist->broadcast ? "broadcast" : "partitioned") + " over " +
                              std::to_string(sessions.size()) + " workers");
  if (cache) cache_table(table);
}

void Coordinator::cache_table(const std::string& table) {
  std::shared_ptr<const Distribution> dist;
  {
    std::lock_guard lock(mu_);
    auto it = distributions_.find(table);
    if (it == distributions_.end()) throw Error(ErrorCode::kUnknownTable, "unknown table " + table);
    dist = it->second;
  }
  if (dist->cached) return;
  std::vector<std::pair<SessionRef, std::future<void>>> waits;
  for (std::uint64_t serial : dist->holders) {
    auto s = session_by_serial(serial);
    if (!s) {
      throw Error(ErrorCode::kNoWorkers,
                  "a worker holding " + table + " is gone; load the table again");
    }
    const std::uint64_t seq = next_seq_++;
    waits.emplace_back(s, std::async(std::launch::async, [this, s, table, seq] {
                         control(s, Cache{seq, table}, seq);
                       }));
  }
  std::optional<Error> failure;
  for (auto& [s, f] : waits) {
    try {
      f.get();
      std::lock_guard lock(s->mu);
      s->cached.insert(table);
    } catch (const Error& e) {
      if (!failure) failure = e;
    }
  }
  if (failure) throw *failure;
  std::lock_guard lock(mu_);
  auto it = distributions_.find(table);
  if (it != distributions_.end() && it->second == dist) {
    auto updated = std::make_shared<Distribution>(*dist);
    updated->cached = true;
    it->second = updated;
  }
}

engine::QueryResult Coordinator::submit(std::string_view sql, std::optional<engine::StorageMode> mode) {
  const auto start = Clock::now();
  const engine::StorageMode m = mode.value_or(config_.default_mode);
  sql::QueryAst ast = sql::parse(sql);
  if (alive_workers() == 0) throw Error(ErrorCode::kNoWorkers, "no alive workers");
  sql::ResolvedQuery q = sql::resolve(ast, catalog_);

  std::shared_ptr<const Distribution> probe_dist;
  std::shared_ptr<const Distribution> build_dist;
  engine::PhysicalPlan p;
  {
    std::lock_guard lock(mu_);
    auto dist_of = [&](const catalog::TableRef& t) {
      auto it = distributions_.find(t->name());
      if (it == distributions_.end()) throw Error(ErrorCode::kUnknownTable, "unknown table " + t->name());
      return it->second;
    };
    // Plan against the handles the distributions were built from.
    q.left = dist_of(q.left)->table;
    if (q.right) q.right = dist_of(q.right)->table;
    if (m == engine::StorageMode::kCached) {
      for (const auto& t : {q.left, q.right}) {
        if (t && !dist_of(t)->cached) {
          throw Error(ErrorCode::kNotCached, "table " + t->name() + " is not cached");
        }
      }
    }
    p = engine::plan(q, m, config_.plan);
    probe_dist = distributions_.at(p.scan_table);
    if (p.join) build_dist = distributions_.at(p.join->build_table);
  }
  if (build_dist && !build_dist->broadcast) {
    throw Error(ErrorCode::kUnsupported,
                "join table " + build_dist->table->name() + " was partitioned, not broadcast");
  }

  const std::size_t partition_count = probe_dist->table->partitions.size();
  std::map<std::uint64_t, std::vector<std::size_t>> by_owner;
  for (std::size_t id = 0; id < partition_count; ++id) by_owner[probe_dist->owner[id]].push_back(id);

  auto state = std::make_shared<QueryState>();
  state->id = next_query_++;
  std::vector<std::pair<SessionRef, std::vector<std::size_t>>> targets;
  for (auto& [serial, ids] : by_owner) {
    auto s = session_by_serial(serial);
    if (!s) {
      throw Error(ErrorCode::kNoWorkers, "the worker holding partitions of " + p.scan_table +
                                             " is gone; load the table again");
    }
    if (build_dist && std::find(build_dist->holders.begin(), build_dist->holders.end(), serial) ==
                          build_dist->holders.end()) {
      throw Error(ErrorCode::kIncomplete, "worker " + s->id + " joined after " +
                                              build_dist->table->name() +
                                              " was loaded; load it again");
    }
    state->sessions.insert(serial);
    state->pending.insert(ids.begin(), ids.end());
    targets.emplace_back(std::move(s), std::move(ids));
  }

  {
    std::lock_guard lock(queries_mu_);
    inflight_[state->id] = state;
  }
  auto finish = [&] {
    {
      std::lock_guard lock(queries_mu_);
      inflight_.erase(state->id);
    }
    for (const auto& [s, ids] : targets) {
      std::lock_guard lock(s->mu);
      s->running.erase(state->id);
    }
  };

  for (const auto& [s, ids] : targets) {
    if (!s->alive.load()) {
      state->fail(ErrorCode::kIncomplete, "worker " + s->id + " disconnected");
      break;
    }
    {
      std::lock_guard lock(s->mu);
      s->running.insert(state->id);
    }
    try {
      s->conn->send(Exec{state->id, p, ids});
      ++dispatches_;
    } catch (const Error& e) {
      state->fail(ErrorCode::kIncomplete, "worker " + s->id + ": " + e.what());
      break;
    }
  }

  std::vector<engine::FragmentResult> fragments;
  {
    std::unique_lock lock(state->mu);
    const bool settled = state->cv.wait_for(lock, config_.query_timeout, [&] {
      return state->error.has_value() || state->pending.empty();
    });
    if (!settled) {
      state->error.emplace(ErrorCode::kTimeout, "query timed out after " +
                                                    std::to_string(config_.query_timeout.count()) +
                                                    " ms");
    }
    if (state->error) {
      std::string message = state->error->second;
      if (!state->pending.empty()) message += "; unfinished partitions: " + join_ids(state->pending);
      const ErrorCode code = state->error->first;
      lock.unlock();
      finish();
      throw Error(code, message);
    }
    fragments = std::move(state->fragments);
  }
  finish();

  engine::QueryResult result = engine::merge(std::move(fragments), p, partition_count);
  result.mode = std::string(engine::mode_name(m)) + "-cluster:" + std::to_string(targets.size());
  result.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

void Coordinator::set_plan_options(const engine::PlanOptions& options) {
  std::lock_guard lock(mu_);
  config_.plan = options;
}

engine::PlanOptions Coordinator::plan_options() const {
  std::lock_guard lock(mu_);
  return config_.plan;
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> Coordinator::assignment(
    const std::string& table) const {
  std::lock_guard lock(mu_);
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  auto it = distributions_.find(table);
  if (it == distributions_.end()) return out;
  const auto& dist = *it->second;
  for (std::uint64_t serial : dist.holders) {
    std::string id = "?";
    for (const auto& s : sessions_) {
      if (s->serial == serial) id = s->id;
    }
    std::vector<std::size_t> ids;
    for (std::size_t p = 0; p < dist.owner.size(); ++p) {
      if (dist.broadcast || dist.owner[p] == serial) ids.push_back(p);
    }
    out.emplace_back(id, std::move(ids));
  }
  return out;
}

nlohmann::json Coordinator::status() const {
  using nlohmann::json;
  std::vector<SessionRef> sessions;
  std::map<std::string, std::shared_ptr<const Distribution>> dists;
  {
    std::lock_guard lock(mu_);
    sessions = sessions_;
    dists = distributions_;
  }
  const auto now = Clock::now().time_since_epoch().count();
  json workers = json::array();
  std::size_t alive = 0;
  std::uint64_t total_cores = 0;
  std::uint64_t used_cores = 0;
  for (const auto& s : sessions) {
    json assigned = json::object();
    for (const auto& [name, dist] : dists) {
      json ids = json::array();
      for (std::size_t p = 0; p < dist->owner.size(); ++p) {
        if (dist->broadcast || dist->owner[p] == s->serial) ids.push_back(p);
      }
      if (std::find(dist->holders.begin(), dist->holders.end(), s->serial) != dist->holders.end()) {
        assigned[name] = ids;
      }
    }
    std::vector<std::string> cached;
    bool busy = false;
    {
      std::lock_guard lock(s->mu);
      cached.assign(s->cached.begin(), s->cached.end());
      busy = !s->running.empty();
    }
    const bool is_alive = s->alive.load();
    if (is_alive) {
      ++alive;
      total_cores += s->cores;
      if (busy) used_cores += s->cores;
    }
    workers.push_back(
        {{"worker_id", s->id},
         {"address", s->address},
         {"cores", s->cores},
         {"alive", is_alive},
         {"last_heartbeat_ms_ago",
          std::chrono::duration_cast<std::chrono::milliseconds>(
              Clock::duration(now - s->last_heartbeat.load()))
              .count()},
         {"assigned_partitions", assigned},
         {"cached_tables", cached}});
  }
  json tables = json::array();
  json cached_tables = json::array();
  for (const auto& [name, dist] : dists) {
    tables.push_back({{"name", name},
                      {"rows", dist->table->total_rows},
                      {"bytes", dist->table->total_bytes},
                      {"partitions", dist->table->partitions.size()},
                      {"cached", dist->cached},
                      {"distribution", dist->broadcast ? "broadcast" : "partitioned"},
                      {"schema", schema_to_json(dist->table->schema)}});
    if (dist->cached) cached_tables.push_back(name);
  }
  json inflight = json::object();
  {
    std::lock_guard lock(queries_mu_);
    for (const auto& [id, q] : inflight_) {
      std::lock_guard qlock(q->mu);
      inflight[std::to_string(id)] = std::vector<std::size_t>(q->pending.begin(), q->pending.end());
    }
  }
  return {{"mode", "cluster"},
          {"workers", alive},
          {"total_cores", total_cores},
          {"used_cores", used_cores},
          {"worker_info", workers},
          {"tables", tables},
          {"cached_tables", cached_tables},
          {"running_queries", inflight.size()},
          {"inflight", inflight},
          {"heartbeat_interval_ms", config_.heartbeat_interval.count()}};
}

void Coordinator::serve_client(const std::shared_ptr<Connection>& conn, WireMessage first) {
  std::optional<WireMessage> message = std::move(first);
  try {
    while (message) {
      if (auto* m = std::get_if<Submit>(&*message)) {
        try {
          conn->send(Result{m->request_id, submit(m->sql, m->mode)});
        } catch (const Error& e) {
          conn->send(Err{m->request_id, 0, e.code(), e.what(), std::nullopt, e.position()});
        }
      } else if (std::holds_alternative<StatusRequest>(*message)) {
        conn->send(Status{status()});
      } else if (auto* m = std::get_if<Load>(&*message)) {
        try {
          load_table(m->table, m->source, m->schema, m->cache);
          conn->send(Ack{m->seq, "loaded " + m->table});
        } catch (const Error& e) {
          conn->send(Err{0, m->seq, e.code(), e.what(), std::nullopt, e.position()});
        }
      } else {
        conn->send(Err{0, 0, ErrorCode::kProtocol,
                       "unexpected " + std::string(kind_name(*message)) + " from a client",
                       std::nullopt, std::nullopt});
      }
      message = conn->receive();
    }
  } catch (const Error& e) {
    log_debug("coordinator", std::string("client connection ended: ") + e.what());
  }
}

}  // namespace logq::cluster

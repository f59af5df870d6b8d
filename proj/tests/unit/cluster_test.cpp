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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "cluster_fixture.hpp"
#include "logq/bench/generator.hpp"
#include "logq/cluster/client.hpp"
#include "logq/cluster/net.hpp"
#include "logq/cluster/source_path.hpp"
#include "logq/engine/executor.hpp"
#include "logq/sql/parser.hpp"
#include "random_instance.hpp"
#include "temp_dir.hpp"

namespace logq::cluster {

namespace {

using namespace std::chrono_literals;

constexpr const char* kQ1 = "Select count(*) from tMsg";
constexpr const char* kQ2 = "Select * from tFile limit 10";
constexpr const char* kQ3 = "Select count(*) from tMsg join tFile on tMsg.Filepath = tFile.Filepath";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// tFile small enough to broadcast, tMsg large enough to partition.
testing::ClusterOptions split_options(std::size_t workers, std::uint64_t partition_bytes = 4096) {
  testing::ClusterOptions o;
  o.workers = workers;
  o.partition_bytes = partition_bytes;
  o.plan.broadcast_threshold_bytes = 64 * 1024;
  return o;
}

void generate_small(const testing::TempDir& dir, std::uint64_t tmsg = 2000, std::uint64_t tfile = 50) {
  bench::GenSpec spec;
  spec.tmsg_rows = tmsg;
  spec.tfile_rows = tfile;
  bench::generate(spec, dir.path());
}

// A fixed number of equal-length rows, so partition_bytes = row length
// yields one partition per row.
std::uint64_t write_uniform_tmsg(const testing::TempDir& dir, std::size_t rows) {
  std::string csv = "Filepath,Timestamp,MsgType,MsgHash,MsgPath,LineNo\n";
  std::string row;
  for (std::size_t i = 0; i < rows; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "/f%04zu,t,LTE,h,/p,%04zu\n", i % 7, i);
    row = buf;
    csv += row;
  }
  dir.write("tMsg.csv", csv);
  dir.write("tFile.csv", "Filepath,Phone,Carrier,Timestamp\n/f0000,p,c,t\n");
  return row.size();
}

std::size_t total_disk_rows(testing::LocalCluster& c) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.worker_count(); ++i) n += c.worker(i).disk_rows();
  return n;
}

template <typename Pred>
bool eventually(Pred pred, std::chrono::milliseconds limit = 5s) {
  const auto deadline = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < deadline) {
    if (pred()) return true;
    std::this_thread::sleep_for(20ms);
  }
  return pred();
}

}  // namespace

TEST(SourcePathTest, StaysUnderRoot) {
  EXPECT_EQ(source_path("/data", "tMsg.csv"), std::filesystem::path("/data/tMsg.csv"));
  EXPECT_EQ(source_path("/data", "sub/tMsg.csv"), std::filesystem::path("/data/sub/tMsg.csv"));
  EXPECT_THROW(source_path("/data", "/etc/passwd"), Error);
  EXPECT_THROW(source_path("/data", "../x.csv"), Error);
  EXPECT_THROW(source_path("/data", "a/../../x.csv"), Error);
  EXPECT_THROW(source_path("/data", ""), Error);
}

TEST(NetTest, ParseHostPort) {
  auto hp = parse_host_port("10.1.2.3:7077");
  EXPECT_EQ(hp.host, "10.1.2.3");
  EXPECT_EQ(hp.port, 7077);
  EXPECT_THROW(parse_host_port("nohost"), Error);
  EXPECT_THROW(parse_host_port("h:99999"), Error);
  EXPECT_THROW(parse_host_port("h:x"), Error);
}

TEST(NetTest, FramesCrossLoopback) {
  Listener l({"127.0.0.1", 0});
  std::thread server([&] {
    auto s = l.accept();
    Connection c(std::move(*s));
    while (auto m = c.receive()) c.send(*m);
  });
  auto conn = connect_to({"127.0.0.1", l.port()});
  Submit big{1, std::string(3 << 20, 'x'), std::nullopt};
  conn->send(big);
  EXPECT_EQ(conn->receive(), WireMessage(big));
  conn->send(Heartbeat{});
  EXPECT_EQ(conn->receive(), WireMessage(Heartbeat{}));
  conn->shutdown();
  server.join();
  l.close();
}

TEST(CoordinatorTest, NoWorkers) {
  testing::TempDir dir;
  CoordinatorConfig config;
  config.data_root = dir.path();
  Coordinator coordinator(config);
  coordinator.start();
  auto status = coordinator.status();
  EXPECT_EQ(status["workers"], 0);
  EXPECT_EQ(code_of([&] { coordinator.submit(kQ1); }), ErrorCode::kNoWorkers);
  coordinator.stop();
}

TEST(CoordinatorTest, OneWorkerStatus) {
  testing::TempDir dir;
  generate_small(dir);
  testing::LocalCluster c(dir.path(), split_options(1));
  auto status = c.coordinator().status();
  EXPECT_EQ(status["workers"], 1);
  ASSERT_EQ(status["worker_info"].size(), 1u);
  EXPECT_EQ(status["worker_info"][0]["worker_id"], "w1");
  EXPECT_EQ(status["worker_info"][0]["alive"], true);

  c.coordinator().load_table("tFile", "tFile.csv");
  c.coordinator().load_table("tMsg", "tMsg.csv");
  status = c.coordinator().status();
  EXPECT_EQ(status["cached_tables"], (nlohmann::json{"tFile", "tMsg"}));
  EXPECT_EQ(c.coordinator().submit(kQ1).rows[0][0], "2000");
}

TEST(CoordinatorTest, DuplicateWorkerIdRejected) {
  testing::TempDir dir;
  testing::LocalCluster c(dir.path(), split_options(1));
  auto conn = connect_to(parse_host_port(c.coordinator().address()));
  conn->send(Register{"w1", "127.0.0.1:1", 1});
  auto reply = conn->receive();
  ASSERT_TRUE(reply.has_value());
  auto* err = std::get_if<Err>(&*reply);
  ASSERT_NE(err, nullptr);
  EXPECT_EQ(err->code, ErrorCode::kBadRequest);
  EXPECT_EQ(c.coordinator().alive_workers(), 1u);

  WorkerConfig wc;
  wc.coordinator = c.coordinator().address();
  wc.worker_id = "w1";
  wc.max_retries = 0;
  Worker dup(wc);
  EXPECT_EQ(dup.run(), 1);
}

TEST(CoordinatorTest, TenPartitionsOverThreeWorkers) {
  testing::TempDir dir;
  const auto row = write_uniform_tmsg(dir, 10);
  testing::LocalCluster c(dir.path(), split_options(3, row));
  auto o = c.coordinator().plan_options();
  o.broadcast_threshold_bytes = row * 2;
  c.coordinator().set_plan_options(o);
  c.coordinator().load_table("tMsg", "tMsg.csv");
  c.coordinator().load_table("tFile", "tFile.csv");

  auto a = c.coordinator().assignment("tMsg");
  ASSERT_EQ(a.size(), 3u);
  std::vector<std::size_t> loads;
  for (const auto& [id, ids] : a) loads.push_back(ids.size());
  std::sort(loads.rbegin(), loads.rend());
  EXPECT_EQ(loads, (std::vector<std::size_t>{4, 3, 3}));

  // tFile is broadcast: every worker holds partition 0.
  for (const auto& [id, ids] : c.coordinator().assignment("tFile")) {
    EXPECT_EQ(ids, std::vector<std::size_t>{0}) << id;
  }
  auto status = c.coordinator().status();
  for (const auto& t : status["tables"]) {
    EXPECT_EQ(t["distribution"], t["name"] == "tFile" ? "broadcast" : "partitioned");
  }
  EXPECT_EQ(c.coordinator().submit(kQ1).rows[0][0], "10");
  EXPECT_EQ(c.coordinator().submit(kQ3).rows[0][0], "2");
}

// Assigned ids are pairwise disjoint, cover 0..n-1 and differ in count by
// at most one between workers.
TEST(CoordinatorTest, AssignmentPartitionsExactlyProperty) {
  std::mt19937_64 rng(71);
  for (std::size_t workers = 1; workers <= 8; ++workers) {
    testing::TempDir dir;
    const std::size_t rows = 1 + rng() % 40;
    const auto row = write_uniform_tmsg(dir, rows);
    testing::LocalCluster c(dir.path(), split_options(workers, row * (1 + rng() % 3)));
    auto o = c.coordinator().plan_options();
    o.broadcast_threshold_bytes = 0;
    c.coordinator().set_plan_options(o);
    c.coordinator().load_table("tMsg", "tMsg.csv", std::nullopt, false);
    const std::size_t n = c.coordinator().status()["tables"][0]["partitions"].get<std::size_t>();

    std::multiset<std::size_t> all;
    std::size_t lo = n, hi = 0;
    auto a = c.coordinator().assignment("tMsg");
    EXPECT_EQ(a.size(), workers);
    for (const auto& [id, ids] : a) {
      all.insert(ids.begin(), ids.end());
      lo = std::min(lo, ids.size());
      hi = std::max(hi, ids.size());
    }
    std::multiset<std::size_t> want;
    for (std::size_t i = 0; i < n; ++i) want.insert(i);
    EXPECT_EQ(all, want) << workers << " workers";
    EXPECT_LE(hi - lo, 1u);
    EXPECT_EQ(c.coordinator().submit(kQ1, engine::StorageMode::kDiskStream).rows[0][0],
              std::to_string(rows));
  }
}

TEST(WorkerTest, ExecForUnassignedPartitionIsProtocolError) {
  testing::TempDir dir;
  const auto row = write_uniform_tmsg(dir, 4);
  Listener fake({"127.0.0.1", 0});
  WorkerConfig wc;
  wc.coordinator = "127.0.0.1:" + std::to_string(fake.port());
  wc.data_root = dir.path();
  wc.worker_id = "solo";
  wc.max_retries = 0;
  Worker worker(wc);
  worker.start();

  auto sock = fake.accept();
  ASSERT_TRUE(sock.has_value());
  Connection conn(std::move(*sock));
  auto reg = conn.receive();
  ASSERT_TRUE(reg && std::holds_alternative<Register>(*reg));
  EXPECT_EQ(std::get<Register>(*reg).worker_id, "solo");
  conn.send(Ack{0, "registered"});

  auto schema = catalog::builtin_schemas().second;
  const std::uint64_t header = std::string("Filepath,Timestamp,MsgType,MsgHash,MsgPath,LineNo\n").size();
  conn.send(AssignLoad{1, "tMsg", schema, "tMsg.csv", {{0, {header, row}, 1}}});
  std::optional<WireMessage> ack;
  do {
    ack = conn.receive();
  } while (ack && std::holds_alternative<Heartbeat>(*ack));
  ASSERT_TRUE(ack && std::holds_alternative<Ack>(*ack)) << (ack ? kind_name(*ack) : "eof");

  engine::PhysicalPlan plan;
  plan.mode = engine::StorageMode::kDiskStream;
  plan.scan_table = "tMsg";
  plan.scan_width = 6;
  plan.count = true;
  plan.output_names = {"count"};
  conn.send(Exec{9, plan, {0, 5}});

  bool saw_fragment = false, saw_err = false;
  while (!(saw_fragment && saw_err)) {
    auto m = conn.receive();
    ASSERT_TRUE(m.has_value());
    if (auto* f = std::get_if<Fragment>(&*m)) {
      EXPECT_EQ(f->result.partition_id, 0u);
      EXPECT_EQ(std::get<engine::PartialCount>(f->result.payload).value, 1u);
      saw_fragment = true;
    } else if (auto* e = std::get_if<Err>(&*m)) {
      EXPECT_EQ(e->code, ErrorCode::kProtocol);
      EXPECT_EQ(e->query_id, 9u);
      EXPECT_EQ(e->partition_id, 5u);
      saw_err = true;
    }
  }
  conn.send(Shutdown{});
  EXPECT_EQ(worker.wait(), 0);
  fake.close();
}

TEST(WorkerTest, CachedQueriesDoNotTouchDisk) {
  testing::TempDir dir;
  generate_small(dir, 3000);
  testing::LocalCluster c(dir.path(), split_options(2));
  c.coordinator().load_table("tFile", "tFile.csv");
  c.coordinator().load_table("tMsg", "tMsg.csv");
  const auto after_cache = total_disk_rows(c);
  EXPECT_EQ(after_cache, 3000u + 2 * 50u);  // tFile is cached on both workers
  for (int i = 0; i < 10; ++i) {
    for (const char* q : {kQ1, kQ2, kQ3}) {
      auto r = c.coordinator().submit(q, engine::StorageMode::kCached);
      EXPECT_EQ(r.disk_rows, 0u);
    }
  }
  EXPECT_EQ(total_disk_rows(c), after_cache);
  // DiskStream does read.
  EXPECT_GT(c.coordinator().submit(kQ1, engine::StorageMode::kDiskStream).disk_rows, 0u);
}

TEST(WorkerTest, SilentWorkerIsMarkedDead) {
  testing::TempDir dir;
  testing::ClusterOptions o = split_options(1);
  o.heartbeat = 100ms;
  testing::LocalCluster c(dir.path(), o);
  auto conn = connect_to(parse_host_port(c.coordinator().address()));
  conn->send(Register{"silent", "127.0.0.1:1", 1});
  auto reply = conn->receive();
  ASSERT_TRUE(reply && std::holds_alternative<Ack>(*reply));
  EXPECT_EQ(c.coordinator().alive_workers(), 2u);
  // Three intervals plus slack for the monitor's half-interval tick.
  EXPECT_TRUE(eventually([&] { return c.coordinator().alive_workers() == 1; }, 2s));
  auto status = c.coordinator().status();
  for (const auto& w : status["worker_info"]) {
    EXPECT_EQ(w["alive"], w["worker_id"] != "silent") << w.dump();
  }
}

TEST(WorkerTest, RestartedWorkerComesBackEmpty) {
  testing::TempDir dir;
  generate_small(dir);
  testing::LocalCluster c(dir.path(), split_options(2));
  c.coordinator().load_table("tFile", "tFile.csv");
  c.coordinator().load_table("tMsg", "tMsg.csv");
  EXPECT_FALSE(c.worker(1).cached_tables().empty());

  c.worker(1).stop();
  c.worker(1).wait();
  EXPECT_TRUE(c.worker(1).cached_tables().empty());
  EXPECT_TRUE(eventually([&] { return c.coordinator().alive_workers() == 1; }));

  auto& again = c.add_worker("w2");
  EXPECT_TRUE(eventually([&] { return again.registered() && c.coordinator().alive_workers() == 2; }));
  EXPECT_TRUE(again.cached_tables().empty());
  for (const auto& w : c.coordinator().status()["worker_info"]) {
    if (w["worker_id"] == "w2" && w["alive"] == true) {
      EXPECT_TRUE(w["cached_tables"].empty()) << w.dump();
    }
  }
  // Partitions owned by the old session are gone until the tables are reloaded.
  EXPECT_NE(code_of([&] { c.coordinator().submit(kQ1); }), ErrorCode::kInternal);
  c.coordinator().load_table("tFile", "tFile.csv");
  c.coordinator().load_table("tMsg", "tMsg.csv");
  EXPECT_EQ(c.coordinator().submit(kQ3).rows[0][0], "2000");
}

TEST(CoordinatorTest, NonQueryCausesNoWorkerTraffic) {
  testing::TempDir dir;
  generate_small(dir);
  testing::LocalCluster c(dir.path(), split_options(2));
  c.coordinator().load_table("tMsg", "tMsg.csv");
  const auto before = c.coordinator().dispatch_count();
  EXPECT_EQ(code_of([&] { c.coordinator().submit("DROP TABLE tMsg"); }), ErrorCode::kNonQuery);
  EXPECT_EQ(code_of([&] { c.coordinator().submit("SELECT * FROM tMsg; DROP TABLE tMsg"); }),
            ErrorCode::kNonQuery);
  EXPECT_EQ(code_of([&] { c.coordinator().submit("SELECT Phone FROM tMsg"); }),
            ErrorCode::kUnknownColumn);
  EXPECT_EQ(c.coordinator().dispatch_count(), before);
  EXPECT_EQ(c.coordinator().submit(kQ1).rows[0][0], "2000");
}

TEST(CoordinatorTest, NotCachedAndOversizeBuild) {
  testing::TempDir dir;
  generate_small(dir);
  testing::LocalCluster c(dir.path(), split_options(2));
  c.coordinator().load_table("tFile", "tFile.csv", std::nullopt, false);
  c.coordinator().load_table("tMsg", "tMsg.csv", std::nullopt, false);
  EXPECT_EQ(code_of([&] { c.coordinator().submit(kQ1, engine::StorageMode::kCached); }),
            ErrorCode::kNotCached);
  EXPECT_EQ(c.coordinator().submit(kQ3, engine::StorageMode::kDiskStream).rows[0][0], "2000");
  c.coordinator().cache_table("tMsg");
  c.coordinator().cache_table("tFile");
  EXPECT_EQ(c.coordinator().submit(kQ3, engine::StorageMode::kCached).rows[0][0], "2000");
}

TEST(CoordinatorTest, MissingSourceAbortsLoad) {
  testing::TempDir dir;
  testing::LocalCluster c(dir.path(), split_options(1));
  EXPECT_EQ(code_of([&] { c.coordinator().load_table("tMsg", "nope.csv"); }), ErrorCode::kIo);
  EXPECT_EQ(code_of([&] { c.coordinator().load_table("tMsg", "../etc/passwd"); }),
            ErrorCode::kBadRequest);
}

TEST(CoordinatorTest, MatchesSingleProcess) {
  testing::TempDir dir;
  generate_small(dir, 5000, 80);
  catalog::Catalog local;
  auto [tfile, tmsg] = catalog::builtin_schemas();
  local.register_table(catalog::load_table(dir / "tFile.csv", tfile, 4096));
  local.register_table(catalog::load_table(dir / "tMsg.csv", tmsg, 4096));
  local.cache_table("tFile");
  local.cache_table("tMsg");

  testing::LocalCluster c(dir.path(), split_options(3));
  c.coordinator().load_table("tFile", "tFile.csv");
  c.coordinator().load_table("tMsg", "tMsg.csv");
  for (const char* q : {kQ1, kQ2, kQ3, "SELECT MsgType, LineNo FROM tMsg WHERE LineNo < '3' LIMIT 40",
                        "SELECT Phone, MsgHash FROM tMsg JOIN tFile ON tMsg.Filepath = tFile.Filepath "
                        "WHERE Carrier = 'Sprint'"}) {
    for (auto mode : {engine::StorageMode::kCached, engine::StorageMode::kDiskStream}) {
      auto want = engine::execute_local(sql::resolve(sql::parse(q), local), local, mode);
      auto got = c.coordinator().submit(q, mode);
      EXPECT_TRUE(got.same_data(want)) << q;
      EXPECT_EQ(got.mode, std::string(engine::mode_name(mode)) + "-cluster:3");
    }
  }
}

TEST(ClientTest, SubmitStatusLoadOverTcp) {
  testing::TempDir dir;
  generate_small(dir);
  testing::LocalCluster c(dir.path(), split_options(2));
  ClusterClient client(c.coordinator().address());
  client.load("tFile", "tFile.csv", std::nullopt, true);
  client.load("tMsg", "tMsg.csv", std::nullopt, true);
  EXPECT_EQ(client.submit(kQ1, std::nullopt).rows[0][0], "2000");
  EXPECT_EQ(client.submit(kQ2, engine::StorageMode::kDiskStream).row_count, 10u);
  EXPECT_EQ(client.status()["workers"], 2);
  try {
    client.submit("SELECT * FROM tMsg WHERE", std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntax);
    EXPECT_TRUE(e.position().has_value());
  }
  EXPECT_EQ(code_of([&] { client.load("tMsg", "missing.csv", std::nullopt, true); }), ErrorCode::kIo);
  // Still usable after an error reply.
  EXPECT_EQ(client.submit(kQ3, std::nullopt).rows[0][0], "2000");
}

}  // namespace logq::cluster

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
#include <string>

#include "logq/common/error.hpp"
#include "logq/engine/executor.hpp"
#include "logq/engine/fragment.hpp"
#include "logq/engine/hash_index.hpp"
#include "logq/engine/plan.hpp"
#include "logq/engine/result.hpp"
#include "logq/sql/parser.hpp"
#include "random_instance.hpp"
#include "reference.hpp"

namespace logq::engine {

namespace {

// Three files, five messages; two messages point at a file not in tFile.
testing::Instance fixed_instance() {
  testing::Instance inst;
  inst.tfile_csv =
      "Filepath,Phone,Carrier,Timestamp\n"
      "/f1,LGE,Verizon,2015-12-19 16:42:58.596250\n"
      "/f2,N6,AT&T,2015-12-19 16:43:00.000000\n"
      "/f3,M8,Sprint,2015-12-20 01:00:00.000000\n";
  inst.tmsg_csv =
      "Filepath,Timestamp,MsgType,MsgHash,MsgPath,LineNo\n"
      "/f1,t1,LTE_PHY_Serv_Cell_Measuremnt,aa,/LTE/PHY,1\n"
      "/f1,t2,LTE_RRC_OTA_Packet,bb,/LTE/RRC,2\n"
      "/f2,t3,LTE_PHY_Serv_Cell_Measuremnt,cc,/LTE/PHY,1\n"
      "/zz,t4,WCDMA_RRC_OTA_Packet,dd,/WCDMA,1\n"
      "/zz,t5,WCDMA_RRC_OTA_Packet,ee,/WCDMA,2\n";
  inst.tfile_rows = 3;
  inst.tmsg_rows = 5;
  return inst;
}

QueryResult run(const catalog::Catalog& c, std::string_view sql, StorageMode mode,
                ExecOptions options = {}) {
  return execute_local(sql::resolve(sql::parse(sql), c), c, mode, options);
}

}  // namespace

TEST(PlanTest, SmallerTableIsBuildSide) {
  auto c = testing::instance_catalog(fixed_instance(), 1 << 20, true);
  auto q = sql::resolve(sql::parse("SELECT count(*) FROM tFile JOIN tMsg ON tFile.Filepath = tMsg.Filepath"), *c);
  auto p = plan(q, StorageMode::kCached);
  EXPECT_EQ(p.scan_table, "tMsg");
  ASSERT_TRUE(p.join.has_value());
  EXPECT_EQ(p.join->build_table, "tFile");
  EXPECT_FALSE(p.metadata_count);
}

TEST(PlanTest, BuildSideOverThresholdIsUnsupported) {
  auto c = testing::instance_catalog(fixed_instance(), 1 << 20, true);
  auto q = sql::resolve(sql::parse("SELECT * FROM tMsg JOIN tFile ON tMsg.Filepath = tFile.Filepath"), *c);
  PlanOptions o;
  o.broadcast_threshold_bytes = 10;
  try {
    plan(q, StorageMode::kCached, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupported);
  }
}

TEST(PlanTest, MetadataCountOnlyWhenCachedAndAllowed) {
  auto c = testing::instance_catalog(fixed_instance(), 1 << 20, true);
  auto q = sql::resolve(sql::parse("Select count(*) from tMsg"), *c);
  EXPECT_TRUE(plan(q, StorageMode::kCached).metadata_count);
  EXPECT_FALSE(plan(q, StorageMode::kDiskStream).metadata_count);
  PlanOptions off;
  off.allow_metadata_count = false;
  EXPECT_FALSE(plan(q, StorageMode::kCached, off).metadata_count);
  auto filtered = sql::resolve(sql::parse("select count(*) from tMsg where LineNo = '1'"), *c);
  EXPECT_FALSE(plan(filtered, StorageMode::kCached).metadata_count);
}

TEST(PlanTest, FragmentBudget) {
  PhysicalPlan p;
  EXPECT_EQ(p.fragment_budget(), std::numeric_limits<std::uint64_t>::max());
  p.limit = 10;
  EXPECT_EQ(p.fragment_budget(), 10u);
  p.row_cap = 3;
  EXPECT_EQ(p.fragment_budget(), 4u);
  p.count = true;
  EXPECT_EQ(p.fragment_budget(), std::numeric_limits<std::uint64_t>::max());
}

TEST(HashIndexTest, LookupMatchesLinearScan) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 30; ++round) {
    auto inst = testing::random_instance(rng, 100, 400);
    auto c = testing::instance_catalog(inst, 512, true);
    auto t = c->get("tMsg");
    auto index = build_hash_index(*t, 0);
    EXPECT_EQ(index.row_count(), inst.tmsg_rows);
    auto ref = testing::instance_ref_tables(inst).at("tMsg");
    for (const auto& key : {std::string("/d/ATT_N6/c.mi2log"), std::string(""), std::string("2"),
                            std::string("absent")}) {
      std::vector<std::uint64_t> want;
      for (std::uint64_t r = 0; r < ref.rows.size(); ++r) {
        if (ref.rows[r][0] == key) want.push_back(r);
      }
      auto got = index.lookup(key);
      EXPECT_EQ(std::vector<std::uint64_t>(got.begin(), got.end()), want) << key;
      for (auto r : got) EXPECT_EQ(index.value(r, 5), ref.rows[r][5]);
    }
  }
}

TEST(FragmentTest, CachedAndDiskAgree) {
  auto inst = fixed_instance();
  auto c = testing::instance_catalog(inst, 1 << 20, true);
  auto q = sql::resolve(sql::parse("SELECT MsgHash FROM tMsg WHERE MsgType >= 'LTE'"), *c);
  auto t = c->get("tMsg");
  auto cached = execute_fragment(plan(q, StorageMode::kCached), FragmentInput::cached(t->resident[0]),
                                 nullptr, 7);
  auto disk = execute_fragment(plan(q, StorageMode::kDiskStream),
                               FragmentInput::disk(*t->source, t->partitions[0], t->schema), nullptr, 7);
  EXPECT_EQ(cached.payload, disk.payload);
  EXPECT_EQ(cached.query_id, 7u);
  EXPECT_EQ(disk.disk_rows, 5u);
  EXPECT_EQ(cached.disk_rows, 0u);
  const auto& rows = std::get<RowsPayload>(cached.payload);
  EXPECT_EQ(rows.columns[0], (std::vector<std::string>{"aa", "bb", "cc", "dd", "ee"}));
}

TEST(FragmentTest, LimitStopsScanEarly) {
  std::string csv = "Filepath,Phone,Carrier,Timestamp\n";
  for (int i = 0; i < 1000; ++i) csv += "/f" + std::to_string(i) + ",p,c,t\n";
  testing::Instance inst = fixed_instance();
  inst.tfile_csv = csv;
  auto c = testing::instance_catalog(inst, 1 << 20, false);
  auto q = sql::resolve(sql::parse("SELECT * FROM tFile LIMIT 10"), *c);
  auto t = c->get("tFile");
  auto f = execute_fragment(plan(q, StorageMode::kDiskStream),
                            FragmentInput::disk(*t->source, t->partitions[0], t->schema), nullptr);
  EXPECT_EQ(std::get<RowsPayload>(f.payload).row_count, 10u);
  EXPECT_EQ(f.rows_scanned, 10u);
}

TEST(MergeTest, OrderIndependentOfArrival) {
  std::mt19937_64 rng(41);
  auto inst = testing::random_instance(rng, 50, 800);
  auto c = testing::instance_catalog(inst, 700, true);
  auto q = sql::resolve(sql::parse("SELECT LineNo, MsgType FROM tMsg WHERE LineNo < '5'"), *c);
  auto p = plan(q, StorageMode::kCached);
  auto t = c->get("tMsg");
  std::vector<FragmentResult> frags;
  for (const auto& part : t->resident) frags.push_back(execute_fragment(p, FragmentInput::cached(part), nullptr));
  const auto want = merge(frags, p, frags.size());
  for (int i = 0; i < 20; ++i) {
    std::shuffle(frags.begin(), frags.end(), rng);
    EXPECT_TRUE(merge(frags, p, frags.size()).same_data(want));
  }
}

TEST(MergeTest, MissingDuplicateAndOversize) {
  auto c = testing::instance_catalog(fixed_instance(), 64, true);
  auto t = c->get("tMsg");
  ASSERT_GE(t->resident.size(), 2u);
  PlanOptions o;
  o.row_cap = 2;
  auto p = plan(sql::resolve(sql::parse("SELECT * FROM tMsg"), *c), StorageMode::kCached, o);
  std::vector<FragmentResult> frags;
  for (const auto& part : t->resident) frags.push_back(execute_fragment(p, FragmentInput::cached(part), nullptr));

  auto code_of = [&](std::vector<FragmentResult> f) {
    try {
      merge(std::move(f), p, t->resident.size());
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  EXPECT_EQ(code_of(frags), ErrorCode::kResultTooLarge);
  auto missing = frags;
  missing.pop_back();
  EXPECT_EQ(code_of(missing), ErrorCode::kIncomplete);
  auto dup = frags;
  dup.push_back(frags.front());
  EXPECT_EQ(code_of(dup), ErrorCode::kProtocol);
}

TEST(DigestTest, SensitiveToContentOnly) {
  QueryResult a;
  a.columns = {"x"};
  a.rows = {{"1"}, {"2"}};
  a.row_count = 2;
  QueryResult b = a;
  b.elapsed_ms = 99;
  b.mode = "other";
  EXPECT_EQ(digest(a), digest(b));
  EXPECT_EQ(digest(a).size(), 16u);
  b.rows = {{"2"}, {"1"}};
  EXPECT_NE(digest(a), digest(b));
  b.rows = {{"1"}, {"2"}};
  b.columns = {"y"};
  EXPECT_NE(digest(a), digest(b));
}

TEST(ExecutorTest, FixedQueries) {
  auto c = testing::instance_catalog(fixed_instance(), 80, true);
  for (auto mode : {StorageMode::kCached, StorageMode::kDiskStream}) {
    EXPECT_EQ(run(*c, "Select count(*) from tMsg", mode).rows, (std::vector<std::vector<std::string>>{{"5"}}));
    EXPECT_EQ(run(*c, "Select count(*) from tMsg join tFile on tMsg.Filepath = tFile.Filepath", mode).rows,
              (std::vector<std::vector<std::string>>{{"3"}}));
    auto r = run(*c, "SELECT Phone, Carrier FROM tFile LIMIT 2", mode);
    EXPECT_EQ(r.columns, (std::vector<std::string>{"Phone", "Carrier"}));
    EXPECT_EQ(r.rows, (std::vector<std::vector<std::string>>{{"LGE", "Verizon"}, {"N6", "AT&T"}}));
    auto j = run(*c, "SELECT * FROM tMsg JOIN tFile ON tMsg.Filepath = tFile.Filepath WHERE Phone = 'N6'", mode);
    ASSERT_EQ(j.row_count, 1u);
    EXPECT_EQ(j.columns.size(), 10u);
    EXPECT_EQ(j.columns[0], "tMsg.Filepath");
    EXPECT_EQ(j.rows[0][3], "cc");
    EXPECT_EQ(run(*c, "select count(*) from tMsg limit 0", mode).row_count, 0u);
  }
  EXPECT_EQ(run(*c, "Select count(*) from tMsg", StorageMode::kCached).mode, "cached-single");
  EXPECT_EQ(run(*c, "Select count(*) from tMsg", StorageMode::kDiskStream).mode, "disk-single");
}

TEST(ExecutorTest, CachedModeRequiresCachedTables) {
  auto c = testing::instance_catalog(fixed_instance(), 80, false);
  try {
    run(*c, "Select count(*) from tMsg", StorageMode::kCached);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotCached);
  }
  EXPECT_NO_THROW(run(*c, "Select count(*) from tMsg", StorageMode::kDiskStream));
}

TEST(ExecutorTest, RowCapReportsTooLarge) {
  auto c = testing::instance_catalog(fixed_instance(), 80, true);
  ExecOptions o;
  o.plan.row_cap = 3;
  EXPECT_THROW(run(*c, "SELECT * FROM tMsg", StorageMode::kCached, o), Error);
  EXPECT_EQ(run(*c, "SELECT * FROM tMsg LIMIT 3", StorageMode::kCached, o).row_count, 3u);
}

TEST(ExecutorTest, LimitBoundsRowsScanned) {
  std::mt19937_64 rng(51);
  auto inst = testing::random_instance(rng, 20, 1000);
  auto c = testing::instance_catalog(inst, 256, true);
  const std::size_t parts = c->get("tMsg")->partitions.size();
  for (auto mode : {StorageMode::kCached, StorageMode::kDiskStream}) {
    auto r = run(*c, "SELECT * FROM tMsg LIMIT 10", mode);
    EXPECT_LE(r.rows_scanned, 10 * parts);
  }
}

}  // namespace logq::engine

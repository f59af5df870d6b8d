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

#include "wire_samples.hpp"

#include <fstream>
#include <sstream>

namespace logq::testing {

using namespace logq::cluster;

namespace {

engine::PhysicalPlan sample_plan() {
  engine::PhysicalPlan p;
  p.mode = engine::StorageMode::kDiskStream;
  p.scan_table = "tMsg";
  p.scan_width = 6;
  p.scan_columns = {0, 2};
  p.probe_filter = {{{engine::PlanSide::kProbe, 2}, sql::CompareOp::kNe, "it's"}};
  p.join = engine::JoinStep{"tFile", 0, 0};
  p.build_filter = {{{engine::PlanSide::kBuild, 2}, sql::CompareOp::kGe, "AT&T"}};
  p.outputs = {{engine::PlanSide::kBuild, 1}, {engine::PlanSide::kProbe, 2}};
  p.output_names = {"Phone", "MsgType"};
  p.limit = 10;
  p.row_cap = 100000;
  return p;
}

catalog::TableSchema sample_schema() { return catalog::builtin_schemas().first; }

}  // namespace

std::vector<WireMessage> wire_samples() {
  engine::FragmentResult rows;
  rows.query_id = 42;
  rows.partition_id = 3;
  rows.payload = engine::RowsPayload{{{"LGE-VS985", ""}, {"LTE_PHY_Serv_Cell_Measuremnt", "x"}}, 2};
  rows.rows_scanned = 17;
  rows.disk_rows = 17;

  engine::QueryResult result;
  result.columns = {"count"};
  result.rows = {{"2000000"}};
  result.row_count = 1;
  result.elapsed_ms = 12.5;
  result.mode = "cached-cluster:4";
  result.rows_scanned = 2000000;

  return {
      Register{"w1", "10.0.0.5:40123", 8},
      Ack{7, "cached 3 partitions"},
      AssignLoad{8, "tMsg", catalog::builtin_schemas().second, "tMsg.csv",
                 {{0, {51, 1024}, 5}, {4, {4147, 998}, 4}}},
      Broadcast{9, "tFile", sample_schema(), "/a,p,c,t\n/b,p,c,t\n", {{0, {33, 18}, 2}}},
      Cache{10, "tMsg"},
      Exec{42, sample_plan(), {0, 4, 8}},
      Fragment{rows},
      Err{42, 0, ErrorCode::kProtocol, "partition 5 is not assigned here", 5, std::nullopt},
      Heartbeat{},
      Shutdown{},
      Submit{3, "SELECT * FROM tMsg LIMIT 10;", engine::StorageMode::kCached},
      Result{3, result},
      StatusRequest{},
      Status{nlohmann::json{{"mode", "cluster"}, {"workers", 2}, {"cached_tables", {"tFile", "tMsg"}}}},
      Load{11, "tFile", "tFile.csv", std::nullopt, true},
  };
}

std::filesystem::path golden_wire_dir(const std::filesystem::path& source_dir) {
  return source_dir / "tests" / "golden" / "wire";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace logq::testing

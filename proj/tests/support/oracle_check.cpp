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

#include "oracle_check.hpp"

#include <chrono>
#include <memory>
#include <random>

#include "cluster_fixture.hpp"
#include "logq/engine/executor.hpp"
#include "logq/sql/parser.hpp"
#include "random_instance.hpp"
#include "reference.hpp"
#include "temp_dir.hpp"

namespace logq::testing {

namespace {

std::string describe(const std::vector<std::vector<std::string>>& rows) {
  std::string out = std::to_string(rows.size()) + " rows";
  if (!rows.empty() && !rows[0].empty()) out += ", first " + rows[0][0];
  return out;
}

}  // namespace

OracleStats run_oracle_equivalence(std::size_t instances, std::uint64_t seed,
                                   std::size_t queries_per_instance, std::size_t max_tmsg,
                                   std::size_t max_tfile) {
  const auto start = std::chrono::steady_clock::now();
  OracleStats stats;
  std::mt19937_64 rng(seed);
  TempDir dir;

  std::vector<std::unique_ptr<LocalCluster>> clusters;
  for (std::size_t workers : {1, 2, 4}) {
    ClusterOptions o;
    o.workers = workers;
    o.partition_bytes = 1024;
    o.heartbeat = std::chrono::milliseconds(500);
    clusters.push_back(std::make_unique<LocalCluster>(dir.path(), o));
  }

  auto fail = [&](const std::string& what) {
    ++stats.mismatches;
    if (stats.failures.size() < 10) stats.failures.push_back(what);
  };

  static const std::uint64_t kLocalPartitionBytes[] = {64, 300, 1024, 8192, 1 << 20};
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance inst = random_instance(rng, max_tfile, max_tmsg);
    dir.write("tFile.csv", inst.tfile_csv);
    dir.write("tMsg.csv", inst.tmsg_csv);
    const auto refs = instance_ref_tables(inst);

    const auto local = instance_catalog(inst, kLocalPartitionBytes[rng() % 5], true);
    // The smaller table is the join build side and must be broadcast; the
    // larger one is partitioned.
    const std::uint64_t smaller =
        std::min(local->get("tFile")->total_bytes, local->get("tMsg")->total_bytes);
    for (auto& c : clusters) {
      auto po = c->coordinator().plan_options();
      po.broadcast_threshold_bytes = smaller;
      c->coordinator().set_plan_options(po);
      c->coordinator().load_table("tFile", "tFile.csv");
      c->coordinator().load_table("tMsg", "tMsg.csv");
    }
    engine::ExecOptions eo;
    eo.plan.broadcast_threshold_bytes = smaller;
    eo.parallelism = 1 + rng() % 4;

    for (std::size_t q = 0; q < queries_per_instance; ++q) {
      const sql::QueryAst ast = random_query(rng);
      const std::string text = sql::render(ast);
      ++stats.queries;
      RefResult want;
      try {
        want = ref_eval(ast, refs);
      } catch (const std::exception& e) {
        fail(text + ": reference failed: " + e.what());
        continue;
      }
      auto check = [&](const std::string& who, auto&& run) {
        ++stats.comparisons;
        try {
          engine::QueryResult got = run();
          if (got.columns != want.columns || got.rows != want.rows ||
              got.row_count != want.rows.size()) {
            fail(text + " [" + who + "]: got " + describe(got.rows) + ", want " +
                 describe(want.rows));
          }
        } catch (const std::exception& e) {
          fail(text + " [" + who + "]: " + e.what());
        }
      };
      for (auto mode : {engine::StorageMode::kCached, engine::StorageMode::kDiskStream}) {
        const std::string m(engine::mode_name(mode));
        check(m + "-single", [&] {
          return engine::execute_local(sql::resolve(ast, *local), *local, mode, eo);
        });
        for (auto& c : clusters) {
          check(m + "-cluster:" + std::to_string(c->worker_count()),
                [&] { return c->coordinator().submit(text, mode); });
        }
      }
    }
    ++stats.instances;
  }
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace logq::testing

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

#include "logq/engine/executor.hpp"

#include <chrono>

#include "logq/common/error.hpp"

namespace logq::engine {

LocalExecutor::LocalExecutor(ExecOptions options)
    : options_(options),
      pool_(options.parallelism != 0 ? options.parallelism : default_parallelism()) {}

std::shared_ptr<const HashIndex> LocalExecutor::index_for(const catalog::TableRef& table,
                                                          std::size_t key_ordinal,
                                                          StorageMode mode,
                                                          std::uint64_t& disk_rows) {
  if (mode == StorageMode::kDiskStream) {
    // Disk mode rebuilds the broadcast side from the source every query.
    auto uncached = std::make_shared<catalog::TableHandle>(*table);
    uncached->cached = false;
    uncached->resident.clear();
    auto fresh = catalog::materialize(uncached, nullptr);
    disk_rows += fresh->total_rows;
    return std::make_shared<const HashIndex>(fresh->resident, key_ordinal);
  }
  std::lock_guard lock(index_mu_);
  auto key = std::make_pair(table.get(), key_ordinal);
  auto it = indexes_.find(key);
  if (it != indexes_.end()) return it->second.second;
  auto index = std::make_shared<const HashIndex>(build_hash_index(*table, key_ordinal));
  // Drop indexes whose tables have been replaced.
  std::erase_if(indexes_, [](const auto& entry) { return entry.second.first.use_count() == 1; });
  indexes_[key] = {table, index};
  return index;
}

QueryResult LocalExecutor::execute(const sql::ResolvedQuery& query,
                                   const catalog::Catalog& catalog, StorageMode mode) {
  const auto start = std::chrono::steady_clock::now();

  sql::ResolvedQuery q = query;
  q.left = catalog.get(query.left->name());
  if (query.right) q.right = catalog.get(query.right->name());
  if (mode == StorageMode::kCached) {
    for (const auto& t : {q.left, q.right}) {
      if (t && !t->cached) {
        throw Error(ErrorCode::kNotCached, "table " + t->name() + " is not cached");
      }
    }
  }

  PhysicalPlan p = plan(q, mode, options_.plan);
  const auto& scan = q.table(probe_side(q));

  std::uint64_t build_disk_rows = 0;
  std::shared_ptr<const HashIndex> index;
  if (p.join) {
    const auto& build = q.table(probe_side(q) == sql::Side::kLeft ? sql::Side::kRight
                                                                  : sql::Side::kLeft);
    index = index_for(build, p.join->build_key, mode, build_disk_rows);
  }

  std::vector<FragmentResult> fragments(scan->partitions.size());
  pool_.parallel_for(scan->partitions.size(), [&](std::size_t i) {
    FragmentInput input = mode == StorageMode::kCached
                              ? FragmentInput::cached(scan->resident[i])
                              : FragmentInput::disk(*scan->source, scan->partitions[i], scan->schema);
    fragments[i] = execute_fragment(p, input, index.get());
  });

  QueryResult result = merge(std::move(fragments), p, scan->partitions.size());
  result.disk_rows += build_disk_rows;
  result.mode = std::string(mode_name(mode)) + "-single";
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

QueryResult execute_local(const sql::ResolvedQuery& query, const catalog::Catalog& catalog,
                          StorageMode mode, const ExecOptions& options) {
  LocalExecutor executor(options);
  return executor.execute(query, catalog, mode);
}

}  // namespace logq::engine

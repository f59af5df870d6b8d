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

#include "logq/engine/plan.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "logq/common/error.hpp"

namespace logq::engine {

std::string_view mode_name(StorageMode mode) {
  return mode == StorageMode::kCached ? "cached" : "disk";
}

std::optional<StorageMode> mode_from_name(std::string_view name) {
  if (name == "cached" || name == "Cached") return StorageMode::kCached;
  if (name == "disk" || name == "DiskStream" || name == "diskstream") return StorageMode::kDiskStream;
  return std::nullopt;
}

std::uint64_t PhysicalPlan::fragment_budget() const {
  std::uint64_t budget = std::numeric_limits<std::uint64_t>::max();
  if (count) return budget;
  if (limit) budget = *limit;
  if (row_cap && *row_cap < budget) budget = *row_cap + 1;
  return budget;
}

sql::Side probe_side(const sql::ResolvedQuery& query) {
  if (!query.right) return sql::Side::kLeft;
  return query.left->total_bytes < query.right->total_bytes ? sql::Side::kRight : sql::Side::kLeft;
}

PhysicalPlan plan(const sql::ResolvedQuery& query, StorageMode mode, const PlanOptions& options) {
  PhysicalPlan p;
  p.mode = mode;
  p.limit = query.limit;
  p.row_cap = options.row_cap;
  p.count = query.count;

  const sql::Side probe = probe_side(query);
  const auto& probe_table = query.table(probe);
  p.scan_table = probe_table->name();
  p.scan_width = probe_table->schema.width();

  auto slot = [probe](const sql::BoundColumn& c) {
    return ColumnSlot{c.side == probe ? PlanSide::kProbe : PlanSide::kBuild, c.ordinal};
  };

  std::set<std::size_t> needed;
  if (query.right) {
    const sql::Side build = probe == sql::Side::kLeft ? sql::Side::kRight : sql::Side::kLeft;
    const auto& build_table = query.table(build);
    if (build_table->total_bytes > options.broadcast_threshold_bytes) {
      throw Error(ErrorCode::kUnsupported,
                  "join build side " + build_table->name() + " has " +
                      std::to_string(build_table->total_bytes) +
                      " bytes, over the broadcast threshold of " +
                      std::to_string(options.broadcast_threshold_bytes) + " bytes");
    }
    const auto& probe_key = probe == sql::Side::kLeft ? query.left_key : query.right_key;
    const auto& build_key = probe == sql::Side::kLeft ? query.right_key : query.left_key;
    p.join = JoinStep{build_table->name(), probe_key->ordinal, build_key->ordinal};
    needed.insert(probe_key->ordinal);
  }

  for (const auto& term : query.filter) {
    FilterTerm f{slot(term.column), term.op, term.literal};
    if (f.column.side == PlanSide::kProbe) {
      needed.insert(f.column.ordinal);
      p.probe_filter.push_back(std::move(f));
    } else {
      p.build_filter.push_back(std::move(f));
    }
  }

  for (const auto& col : query.projection) {
    ColumnSlot s = slot(col);
    if (s.side == PlanSide::kProbe) needed.insert(s.ordinal);
    p.outputs.push_back(s);
  }
  for (const auto& out : query.output) p.output_names.push_back(out.name);

  p.scan_columns.assign(needed.begin(), needed.end());
  p.metadata_count = p.count && !p.join && p.probe_filter.empty() &&
                     mode == StorageMode::kCached && options.allow_metadata_count;
  return p;
}

}  // namespace logq::engine

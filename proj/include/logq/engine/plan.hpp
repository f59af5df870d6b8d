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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logq/sql/ast.hpp"
#include "logq/sql/resolver.hpp"

namespace logq::engine {

// kCached reads resident partitions; kDiskStream re-reads and re-parses the
// source byte ranges on every query.
enum class StorageMode { kCached, kDiskStream };

std::string_view mode_name(StorageMode mode);
std::optional<StorageMode> mode_from_name(std::string_view name);

inline constexpr std::uint64_t kDefaultBroadcastThreshold = 256ull << 20;

// Probe is the partitioned (scanned) table, build the broadcast one.
enum class PlanSide { kProbe, kBuild };

struct ColumnSlot {
  PlanSide side = PlanSide::kProbe;
  std::size_t ordinal = 0;

  bool operator==(const ColumnSlot&) const = default;
};

struct FilterTerm {
  ColumnSlot column;
  sql::CompareOp op = sql::CompareOp::kEq;
  std::string literal;

  bool operator==(const FilterTerm&) const = default;
};

struct JoinStep {
  std::string build_table;
  std::size_t probe_key = 0;
  std::size_t build_key = 0;

  bool operator==(const JoinStep&) const = default;
};

// scan -> filter(probe) -> hash-join probe -> filter(build) -> project|count
// -> limit. Fragments stop once they hold fragment_budget() rows.
struct PhysicalPlan {
  StorageMode mode = StorageMode::kCached;
  std::string scan_table;
  std::size_t scan_width = 0;
  // Probe-side ordinals read by the plan, ascending.
  std::vector<std::size_t> scan_columns;
  std::vector<FilterTerm> probe_filter;
  std::optional<JoinStep> join;
  std::vector<FilterTerm> build_filter;
  bool count = false;
  // COUNT answered from partition row counts without reading columns.
  bool metadata_count = false;
  std::vector<ColumnSlot> outputs;
  std::vector<std::string> output_names;
  std::optional<std::uint64_t> limit;
  // Result-size guard: fragments stop after row_cap + 1 rows so the merge
  // can report the overflow.
  std::optional<std::uint64_t> row_cap;

  std::uint64_t fragment_budget() const;
  bool operator==(const PhysicalPlan&) const = default;
};

struct PlanOptions {
  bool allow_metadata_count = true;
  std::uint64_t broadcast_threshold_bytes = kDefaultBroadcastThreshold;
  std::optional<std::uint64_t> row_cap;
};

// For joins the smaller table (by data bytes) becomes the build side; on a
// tie the JOIN table builds. Fails with kUnsupported when the build side is
// over the broadcast threshold.
PhysicalPlan plan(const sql::ResolvedQuery& query, StorageMode mode,
                  const PlanOptions& options = {});

// Which side of a resolved join gets probed.
sql::Side probe_side(const sql::ResolvedQuery& query);

}  // namespace logq::engine

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
#include <string>
#include <variant>
#include <vector>

#include "logq/catalog/catalog.hpp"
#include "logq/engine/hash_index.hpp"
#include "logq/engine/plan.hpp"

namespace logq::engine {

struct RowsPayload {
  // One array per plan output, each of length row_count.
  std::vector<std::vector<std::string>> columns;
  std::size_t row_count = 0;

  bool operator==(const RowsPayload&) const = default;
};

struct PartialCount {
  std::uint64_t value = 0;

  bool operator==(const PartialCount&) const = default;
};

struct FragmentResult {
  std::uint64_t query_id = 0;
  std::size_t partition_id = 0;
  std::variant<RowsPayload, PartialCount> payload;
  // Rows examined before the fragment finished or stopped early.
  std::uint64_t rows_scanned = 0;
  // Rows parsed from the source while executing (DiskStream only).
  std::uint64_t disk_rows = 0;

  bool operator==(const FragmentResult&) const = default;
};

// Where a fragment reads its partition from.
struct FragmentInput {
  std::size_t partition_id = 0;
  std::uint64_t row_count = 0;
  catalog::PartitionRef resident;
  const catalog::ByteSource* source = nullptr;
  catalog::ByteRange range;
  const catalog::TableSchema* schema = nullptr;

  static FragmentInput cached(catalog::PartitionRef partition);
  static FragmentInput disk(const catalog::ByteSource& source,
                            const catalog::PartitionDescriptor& descriptor,
                            const catalog::TableSchema& schema);
};

// Runs one plan over one partition. `build` must be non-null exactly when the
// plan joins. DiskStream plans must get a disk input, Cached plans a resident
// one. I/O failures surface as Error(kIo) naming the partition.
FragmentResult execute_fragment(const PhysicalPlan& plan, const FragmentInput& input,
                                const HashIndex* build, std::uint64_t query_id = 0);

}  // namespace logq::engine

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
#include <vector>

#include "logq/engine/fragment.hpp"
#include "logq/engine/plan.hpp"

namespace logq::engine {

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::size_t row_count = 0;
  double elapsed_ms = 0.0;
  std::string mode;
  std::uint64_t rows_scanned = 0;
  std::uint64_t disk_rows = 0;

  // Columns and rows only; timing and instrumentation are excluded.
  bool same_data(const QueryResult& other) const {
    return columns == other.columns && rows == other.rows && row_count == other.row_count;
  }
};

// Combines one fragment per probe partition (ids 0..partition_count-1).
// Counts are summed; rows are concatenated by ascending partition id and cut
// to the LIMIT. Missing ids fail with kIncomplete, duplicates with
// kProtocol, and more rows than the plan's row_cap with kResultTooLarge.
QueryResult merge(std::vector<FragmentResult> fragments, const PhysicalPlan& plan,
                  std::size_t partition_count);

// Stable 64-bit FNV-1a digest of columns and rows, as 16 hex digits.
std::string digest(const QueryResult& result);

}  // namespace logq::engine

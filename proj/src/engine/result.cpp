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

#include "logq/engine/result.hpp"

#include <algorithm>
#include <cstdio>

#include "logq/common/error.hpp"

namespace logq::engine {

QueryResult merge(std::vector<FragmentResult> fragments, const PhysicalPlan& plan,
                  std::size_t partition_count) {
  std::sort(fragments.begin(), fragments.end(),
            [](const auto& a, const auto& b) { return a.partition_id < b.partition_id; });

  std::vector<std::size_t> missing;
  std::size_t next = 0;
  for (const auto& f : fragments) {
    if (f.partition_id >= partition_count) {
      throw Error(ErrorCode::kProtocol, "fragment for unknown partition " +
                                            std::to_string(f.partition_id));
    }
    if (f.partition_id < next) {
      throw Error(ErrorCode::kProtocol, "duplicate fragment for partition " +
                                            std::to_string(f.partition_id));
    }
    for (; next < f.partition_id; ++next) missing.push_back(next);
    next = f.partition_id + 1;
  }
  for (; next < partition_count; ++next) missing.push_back(next);
  if (!missing.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i != 0) ids += ",";
      ids += std::to_string(missing[i]);
    }
    throw Error(ErrorCode::kIncomplete, "missing fragments for partitions " + ids);
  }

  QueryResult out;
  out.columns = plan.output_names;
  for (const auto& f : fragments) {
    out.rows_scanned += f.rows_scanned;
    out.disk_rows += f.disk_rows;
  }

  if (plan.count) {
    std::uint64_t total = 0;
    for (const auto& f : fragments) {
      const auto* c = std::get_if<PartialCount>(&f.payload);
      if (c == nullptr) throw Error(ErrorCode::kProtocol, "row fragment in a count query");
      total += c->value;
    }
    if (plan.limit.value_or(1) > 0) out.rows.push_back({std::to_string(total)});
    out.row_count = out.rows.size();
    return out;
  }

  const std::uint64_t limit = plan.limit.value_or(UINT64_MAX);
  for (const auto& f : fragments) {
    const auto* rows = std::get_if<RowsPayload>(&f.payload);
    if (rows == nullptr) throw Error(ErrorCode::kProtocol, "count fragment in a row query");
    if (rows->columns.size() != plan.outputs.size()) {
      throw Error(ErrorCode::kProtocol, "fragment width does not match the plan");
    }
    for (std::size_t r = 0; r < rows->row_count && out.rows.size() < limit; ++r) {
      std::vector<std::string> row;
      row.reserve(rows->columns.size());
      for (const auto& col : rows->columns) row.push_back(col.at(r));
      out.rows.push_back(std::move(row));
    }
    if (plan.row_cap && out.rows.size() > *plan.row_cap) {
      throw Error(ErrorCode::kResultTooLarge,
                  "result exceeds " + std::to_string(*plan.row_cap) + " rows; add a LIMIT");
    }
  }
  out.row_count = out.rows.size();
  return out;
}

std::string digest(const QueryResult& result) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::string_view bytes) {
    // Length prefix keeps ("ab","c") and ("a","bc") apart.
    std::uint64_t n = bytes.size();
    for (int i = 0; i < 8; ++i) {
      h ^= (n >> (8 * i)) & 0xFF;
      h *= 1099511628211ull;
    }
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(std::to_string(result.columns.size()));
  mix(std::to_string(result.rows.size()));
  for (const auto& c : result.columns) mix(c);
  for (const auto& row : result.rows) {
    for (const auto& v : row) mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace logq::engine

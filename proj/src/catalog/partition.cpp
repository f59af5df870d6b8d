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

#include "logq/catalog/partition.hpp"

#include "logq/common/error.hpp"

namespace logq::catalog {

ColumnarPartition::ColumnarPartition(std::size_t partition_id, ByteRange source_range,
                                     std::size_t row_count, std::vector<TextColumn> columns,
                                     std::vector<bool> materialized)
    : partition_id_(partition_id),
      source_range_(source_range),
      row_count_(row_count),
      columns_(std::move(columns)),
      materialized_(std::move(materialized)) {
  if (materialized_.size() != columns_.size()) {
    throw Error(ErrorCode::kInternal, "partition column mask width mismatch");
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (materialized_[i] && columns_[i].size() != row_count_) {
      throw Error(ErrorCode::kInternal, "partition column length mismatch");
    }
  }
}

const TextColumn& ColumnarPartition::column(std::size_t ordinal) const {
  if (ordinal >= columns_.size() || !materialized_[ordinal]) {
    throw Error(ErrorCode::kInternal,
                "column " + std::to_string(ordinal) + " not materialized in partition " +
                    std::to_string(partition_id_));
  }
  return columns_[ordinal];
}

std::size_t ColumnarPartition::memory_bytes() const {
  std::size_t total = sizeof(*this);
  for (const auto& c : columns_) total += c.memory_bytes();
  return total;
}

}  // namespace logq::catalog

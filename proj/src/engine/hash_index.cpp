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

#include "logq/engine/hash_index.hpp"

#include <algorithm>

#include "logq/common/error.hpp"

namespace logq::engine {

HashIndex::HashIndex(std::vector<catalog::PartitionRef> partitions, std::size_t key_ordinal)
    : partitions_(std::move(partitions)), key_ordinal_(key_ordinal) {
  row_starts_.reserve(partitions_.size() + 1);
  row_starts_.push_back(0);
  for (const auto& p : partitions_) row_starts_.push_back(row_starts_.back() + p->row_count());
  buckets_.reserve(static_cast<std::size_t>(row_starts_.back()));

  for (std::size_t pi = 0; pi < partitions_.size(); ++pi) {
    const auto& keys = partitions_[pi]->column(key_ordinal_);
    for (std::size_t r = 0; r < keys.size(); ++r) {
      buckets_[keys.at(r)].push_back(row_starts_[pi] + r);
    }
  }
}

std::span<const std::uint64_t> HashIndex::lookup(std::string_view key) const {
  auto it = buckets_.find(key);
  if (it == buckets_.end()) return {};
  return it->second;
}

std::string_view HashIndex::value(std::uint64_t row, std::size_t ordinal) const {
  auto it = std::upper_bound(row_starts_.begin(), row_starts_.end(), row);
  auto pi = static_cast<std::size_t>(it - row_starts_.begin()) - 1;
  return partitions_[pi]->column(ordinal).at(static_cast<std::size_t>(row - row_starts_[pi]));
}

HashIndex build_hash_index(const catalog::TableHandle& table, std::size_t key_ordinal) {
  if (!table.cached) {
    throw Error(ErrorCode::kNotCached, "hash index over " + table.name() + " needs a cached table");
  }
  if (key_ordinal >= table.schema.width()) {
    throw Error(ErrorCode::kInternal, "join key ordinal out of range for " + table.name());
  }
  return HashIndex(table.resident, key_ordinal);
}

}  // namespace logq::engine

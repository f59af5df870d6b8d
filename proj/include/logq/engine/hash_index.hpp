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
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "logq/catalog/catalog.hpp"

namespace logq::engine {

// Join-key -> ascending build-side row ordinals (table-global, in partition
// order). Keeps the build partitions alive; keys view into them.
class HashIndex {
 public:
  HashIndex(std::vector<catalog::PartitionRef> partitions, std::size_t key_ordinal);

  std::span<const std::uint64_t> lookup(std::string_view key) const;

  // Value of `ordinal` in global build row `row`.
  std::string_view value(std::uint64_t row, std::size_t ordinal) const;

  std::uint64_t row_count() const { return row_starts_.back(); }
  std::size_t key_count() const { return buckets_.size(); }
  std::size_t key_ordinal() const { return key_ordinal_; }

 private:
  std::vector<catalog::PartitionRef> partitions_;
  std::vector<std::uint64_t> row_starts_;  // size partitions + 1
  std::size_t key_ordinal_;
  std::unordered_map<std::string_view, std::vector<std::uint64_t>> buckets_;
};

// The table must be cached (kNotCached otherwise).
HashIndex build_hash_index(const catalog::TableHandle& table, std::size_t key_ordinal);

}  // namespace logq::engine

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
#include <filesystem>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "logq/catalog/csv.hpp"
#include "logq/catalog/partition.hpp"
#include "logq/catalog/schema.hpp"

namespace logq {
class ThreadPool;
}

namespace logq::catalog {

inline constexpr std::uint64_t kDefaultPartitionBytes = 64ull << 20;

struct PartitionDescriptor {
  std::size_t partition_id = 0;
  ByteRange range;
  std::uint64_t row_count = 0;

  bool operator==(const PartitionDescriptor&) const = default;
};

using PartitionRef = std::shared_ptr<const ColumnarPartition>;

// A registered table: schema, source, partition layout and, once cached,
// the resident partitions (same order as `partitions`).
struct TableHandle {
  TableSchema schema;
  std::shared_ptr<const ByteSource> source;
  std::vector<PartitionDescriptor> partitions;
  bool cached = false;
  std::vector<PartitionRef> resident;
  std::uint64_t total_rows = 0;
  std::uint64_t total_bytes = 0;

  const std::string& name() const { return schema.name(); }
};

using TableRef = std::shared_ptr<const TableHandle>;

// Splits and parses every range to validate field counts and count rows.
// Columns are not kept; the handle comes back uncached.
TableHandle load_table(std::shared_ptr<const ByteSource> source, TableSchema schema,
                       std::uint64_t target_partition_bytes = kDefaultPartitionBytes,
                       ThreadPool* pool = nullptr);
TableHandle load_table(const std::filesystem::path& path, TableSchema schema,
                       std::uint64_t target_partition_bytes = kDefaultPartitionBytes,
                       ThreadPool* pool = nullptr);

// Re-reads every partition into memory. Returns a new handle with
// cached=true; the input is returned unchanged when already cached.
TableRef materialize(const TableRef& table, ThreadPool* pool = nullptr);

// Bytes needed to hold the table resident.
std::uint64_t estimate_resident_bytes(const TableHandle& table);

struct CatalogOptions {
  // Upper bound on resident bytes across cached tables; 0 picks 3/4 of
  // physical memory.
  std::uint64_t cache_budget_bytes = 0;
};

class Catalog {
 public:
  explicit Catalog(CatalogOptions options = {});

  // Throws Error(kBadRequest) when the name is taken.
  TableRef register_table(TableHandle table);
  // Registers or overwrites.
  TableRef replace_table(TableHandle table);
  void drop_table(const std::string& name);

  TableRef find(const std::string& name) const;
  // Throws Error(kUnknownTable).
  TableRef get(const std::string& name) const;
  std::vector<TableRef> tables() const;

  // Idempotent. Fails with kOutOfMemory, leaving the table uncached, when the
  // table does not fit in the remaining cache budget.
  TableRef cache_table(const std::string& name, ThreadPool* pool = nullptr);

  std::uint64_t cache_budget_bytes() const { return budget_; }
  std::uint64_t cached_bytes() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, TableRef> tables_;
  std::uint64_t budget_;
};

}  // namespace logq::catalog

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

#include "logq/catalog/catalog.hpp"

#include <unistd.h>

#include <mutex>
#include <new>

#include "logq/common/error.hpp"
#include "logq/common/thread_pool.hpp"

namespace logq::catalog {

namespace {

void for_each_index(ThreadPool* pool, std::size_t count,
                    const std::function<void(std::size_t)>& body) {
  if (pool != nullptr) {
    pool->parallel_for(count, body);
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
}

std::string read_range(const ByteSource& source, ByteRange range) {
  std::string bytes(range.length, '\0');
  source.read(range.offset, bytes);
  return bytes;
}

std::uint64_t physical_memory() {
  long pages = ::sysconf(_SC_PHYS_PAGES);
  long page = ::sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return std::uint64_t{8} << 30;
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
}

}  // namespace

TableHandle load_table(std::shared_ptr<const ByteSource> source, TableSchema schema,
                       std::uint64_t target_partition_bytes, ThreadPool* pool) {
  TableHandle table;
  table.schema = std::move(schema);
  auto ranges = split_csv(*source, target_partition_bytes);
  table.partitions.resize(ranges.size());
  const ColumnMask none(table.schema.width(), false);

  for_each_index(pool, ranges.size(), [&](std::size_t i) {
    std::string bytes = read_range(*source, ranges[i]);
    try {
      auto part = parse_csv_range(bytes, table.schema, i, ranges[i], none);
      table.partitions[i] = {i, ranges[i], part.row_count()};
    } catch (const Error& e) {
      throw Error(e.code(), source->describe() + " partition " + std::to_string(i) + ": " + e.what());
    }
  });

  for (const auto& p : table.partitions) {
    table.total_rows += p.row_count;
    table.total_bytes += p.range.length;
  }
  table.source = std::move(source);
  return table;
}

TableHandle load_table(const std::filesystem::path& path, TableSchema schema,
                       std::uint64_t target_partition_bytes, ThreadPool* pool) {
  return load_table(std::make_shared<FileSource>(path), std::move(schema), target_partition_bytes,
                    pool);
}

std::uint64_t estimate_resident_bytes(const TableHandle& table) {
  return table.total_bytes +
         (table.total_rows + table.partitions.size()) * table.schema.width() *
             sizeof(std::uint64_t);
}

TableRef materialize(const TableRef& table, ThreadPool* pool) {
  if (table->cached) return table;
  auto cached = std::make_shared<TableHandle>(*table);
  cached->resident.resize(table->partitions.size());
  for_each_index(pool, table->partitions.size(), [&](std::size_t i) {
    const auto& desc = table->partitions[i];
    std::string bytes = read_range(*table->source, desc.range);
    cached->resident[i] = std::make_shared<const ColumnarPartition>(
        parse_csv_range(bytes, table->schema, desc.partition_id, desc.range));
    if (cached->resident[i]->row_count() != desc.row_count) {
      throw Error(ErrorCode::kIo, table->source->describe() + " changed since load (partition " +
                                      std::to_string(desc.partition_id) + ")");
    }
  });
  cached->cached = true;
  return cached;
}

Catalog::Catalog(CatalogOptions options)
    : budget_(options.cache_budget_bytes != 0 ? options.cache_budget_bytes
                                              : physical_memory() / 4 * 3) {}

TableRef Catalog::register_table(TableHandle table) {
  auto ref = std::make_shared<const TableHandle>(std::move(table));
  std::unique_lock lock(mu_);
  if (!tables_.emplace(ref->name(), ref).second) {
    throw Error(ErrorCode::kBadRequest, "table " + ref->name() + " is already registered");
  }
  return ref;
}

TableRef Catalog::replace_table(TableHandle table) {
  auto ref = std::make_shared<const TableHandle>(std::move(table));
  std::unique_lock lock(mu_);
  tables_[ref->name()] = ref;
  return ref;
}

void Catalog::drop_table(const std::string& name) {
  std::unique_lock lock(mu_);
  tables_.erase(name);
}

TableRef Catalog::find(const std::string& name) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : it->second;
}

TableRef Catalog::get(const std::string& name) const {
  auto t = find(name);
  if (!t) throw Error(ErrorCode::kUnknownTable, "unknown table " + name);
  return t;
}

std::vector<TableRef> Catalog::tables() const {
  std::shared_lock lock(mu_);
  std::vector<TableRef> out;
  for (const auto& [_, t] : tables_) out.push_back(t);
  return out;
}

std::uint64_t Catalog::cached_bytes() const {
  std::shared_lock lock(mu_);
  std::uint64_t total = 0;
  for (const auto& [_, t] : tables_) {
    if (t->cached) total += estimate_resident_bytes(*t);
  }
  return total;
}

TableRef Catalog::cache_table(const std::string& name, ThreadPool* pool) {
  auto table = get(name);
  if (table->cached) return table;

  const std::uint64_t need = estimate_resident_bytes(*table);
  const std::uint64_t used = cached_bytes();
  if (used + need > budget_) {
    throw Error(ErrorCode::kOutOfMemory,
                "caching " + name + " requires " + std::to_string(need) + " bytes but only " +
                    std::to_string(budget_ > used ? budget_ - used : 0) + " of the cache budget remain");
  }

  TableRef cached;
  try {
    cached = materialize(table, pool);
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::kOutOfMemory,
                "caching " + name + " requires " + std::to_string(need) + " bytes: allocation failed");
  }

  std::unique_lock lock(mu_);
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownTable, "unknown table " + name);
  if (it->second->cached) return it->second;
  if (it->second != table) {
    throw Error(ErrorCode::kBadRequest, "table " + name + " was replaced while caching");
  }
  it->second = cached;
  return cached;
}

}  // namespace logq::catalog

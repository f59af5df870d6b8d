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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logq::catalog {

// User tables are all Text; UInt64 only shows up in COUNT result schemas.
enum class ColumnType { kText, kUInt64 };

std::string_view type_name(ColumnType type);
std::optional<ColumnType> type_from_name(std::string_view name);

struct ColumnDef {
  std::string name;
  ColumnType type = ColumnType::kText;

  bool operator==(const ColumnDef&) const = default;
};

class TableSchema {
 public:
  TableSchema() = default;

  // Throws Error(kBadRequest) on duplicate column names, an empty column
  // list, or a primary key naming an unknown column.
  TableSchema(std::string name, std::vector<ColumnDef> columns,
              std::vector<std::string> primary_key = {});

  const std::string& name() const { return name_; }
  const std::vector<ColumnDef>& columns() const { return columns_; }
  const std::vector<std::string>& primary_key() const { return primary_key_; }
  std::size_t width() const { return columns_.size(); }

  std::optional<std::size_t> ordinal_of(std::string_view column) const;

  bool operator==(const TableSchema&) const = default;

 private:
  std::string name_;
  std::vector<ColumnDef> columns_;
  std::vector<std::string> primary_key_;
};

// The two log tables: tFile (one row per trace file) and tMsg (one row per
// decoded message), joined on Filepath.
std::pair<TableSchema, TableSchema> builtin_schemas();

// Schema definition file:
//   table <name>
//   <column> <type>        (one per line, type is "text" or "uint64")
//   pk <col1>,<col2>       (optional)
// Blank lines and lines starting with '#' are skipped.
TableSchema parse_schema_file(std::string_view text);

}  // namespace logq::catalog

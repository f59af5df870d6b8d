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

#include "logq/catalog/schema.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "logq/common/error.hpp"

namespace logq::catalog {

std::string_view type_name(ColumnType type) {
  return type == ColumnType::kText ? "text" : "uint64";
}

std::optional<ColumnType> type_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "text" || lower == "varchar") return ColumnType::kText;
  if (lower == "uint64") return ColumnType::kUInt64;
  return std::nullopt;
}

TableSchema::TableSchema(std::string name, std::vector<ColumnDef> columns,
                         std::vector<std::string> primary_key)
    : name_(std::move(name)), columns_(std::move(columns)), primary_key_(std::move(primary_key)) {
  if (name_.empty()) throw Error(ErrorCode::kBadRequest, "table name is empty");
  if (columns_.empty()) {
    throw Error(ErrorCode::kBadRequest, "table " + name_ + " has no columns");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) throw Error(ErrorCode::kBadRequest, "empty column name in " + name_);
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::kBadRequest, "duplicate column " + c.name + " in " + name_);
    }
  }
  for (const auto& k : primary_key_) {
    if (!seen.contains(k)) {
      throw Error(ErrorCode::kBadRequest, "primary key column " + k + " not in " + name_);
    }
  }
}

std::optional<std::size_t> TableSchema::ordinal_of(std::string_view column) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == column) return i;
  }
  return std::nullopt;
}

std::pair<TableSchema, TableSchema> builtin_schemas() {
  using enum ColumnType;
  TableSchema tfile("tFile",
                    {{"Filepath", kText}, {"Phone", kText}, {"Carrier", kText}, {"Timestamp", kText}},
                    {"Filepath"});
  TableSchema tmsg("tMsg",
                   {{"Filepath", kText},
                    {"Timestamp", kText},
                    {"MsgType", kText},
                    {"MsgHash", kText},
                    {"MsgPath", kText},
                    {"LineNo", kText}},
                   {"Filepath", "Timestamp", "LineNo"});
  return {std::move(tfile), std::move(tmsg)};
}

TableSchema parse_schema_file(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string table;
  std::vector<ColumnDef> columns;
  std::vector<std::string> pk;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    if (!(words >> first) || first.starts_with('#')) continue;
    std::string second;
    words >> second;
    std::string extra;
    if (second.empty() || (words >> extra)) {
      throw Error(ErrorCode::kBadRequest,
                  "schema line " + std::to_string(line_no) + ": expected two words");
    }
    if (first == "table") {
      if (!table.empty()) {
        throw Error(ErrorCode::kBadRequest, "schema line " + std::to_string(line_no) +
                                                ": duplicate table line");
      }
      table = second;
    } else if (first == "pk") {
      std::stringstream cols(second);
      std::string col;
      while (std::getline(cols, col, ',')) pk.push_back(col);
    } else {
      auto type = type_from_name(second);
      if (!type) {
        throw Error(ErrorCode::kBadRequest, "schema line " + std::to_string(line_no) +
                                                ": unknown type " + second);
      }
      columns.push_back({first, *type});
    }
  }
  if (table.empty()) throw Error(ErrorCode::kBadRequest, "schema file lacks a table line");
  return TableSchema(std::move(table), std::move(columns), std::move(pk));
}

}  // namespace logq::catalog

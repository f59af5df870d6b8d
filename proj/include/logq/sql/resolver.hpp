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
#include <optional>
#include <string>
#include <vector>

#include "logq/catalog/catalog.hpp"
#include "logq/sql/ast.hpp"

namespace logq::sql {

// kLeft is the FROM table, kRight the JOIN table.
enum class Side { kLeft, kRight };

struct BoundColumn {
  Side side = Side::kLeft;
  std::size_t ordinal = 0;

  bool operator==(const BoundColumn&) const = default;
};

struct BoundComparison {
  BoundColumn column;
  CompareOp op = CompareOp::kEq;
  std::string literal;

  bool operator==(const BoundComparison&) const = default;
};

struct OutputColumn {
  std::string name;
  catalog::ColumnType type = catalog::ColumnType::kText;
};

struct ResolvedQuery {
  QueryAst ast;
  catalog::TableRef left;
  catalog::TableRef right;  // null without a join
  bool count = false;
  // Projected columns in output order; empty for COUNT.
  std::vector<BoundColumn> projection;
  std::vector<OutputColumn> output;
  std::optional<BoundColumn> left_key;
  std::optional<BoundColumn> right_key;
  std::vector<BoundComparison> filter;
  std::optional<std::uint64_t> limit;

  const catalog::TableRef& table(Side side) const { return side == Side::kLeft ? left : right; }
};

// Binds every name against the catalog. Star expands in schema order; for a
// join the FROM table's columns come first, labeled table.column.
ResolvedQuery resolve(const QueryAst& ast, const catalog::Catalog& catalog);

}  // namespace logq::sql

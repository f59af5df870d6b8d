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
#include <string_view>
#include <variant>
#include <vector>

namespace logq::sql {

// Source positions are informational and excluded from equality, so a
// rendered-and-reparsed tree compares equal to the original.
struct ColumnRef {
  std::optional<std::string> table;
  std::string column;
  std::size_t position = 0;

  std::string display() const { return table ? *table + "." + column : column; }
  bool operator==(const ColumnRef& o) const { return table == o.table && column == o.column; }
};

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view op_text(CompareOp op);

// Byte-wise lexicographic comparison of value against literal.
bool compare(std::string_view value, CompareOp op, std::string_view literal);

struct Comparison {
  ColumnRef column;
  CompareOp op = CompareOp::kEq;
  std::string literal;

  bool operator==(const Comparison&) const = default;
};

// AND-chain; never empty when present.
struct Predicate {
  std::vector<Comparison> terms;

  bool operator==(const Predicate&) const = default;
};

struct JoinClause {
  std::string table;
  ColumnRef left;
  ColumnRef right;
  std::size_t table_position = 0;

  bool operator==(const JoinClause& o) const {
    return table == o.table && left == o.left && right == o.right;
  }
};

struct Star {
  bool operator==(const Star&) const = default;
};
struct CountStar {
  bool operator==(const CountStar&) const = default;
};
using Projection = std::variant<Star, CountStar, std::vector<ColumnRef>>;

struct QueryAst {
  Projection projection = Star{};
  std::string from_table;
  std::optional<JoinClause> join;
  std::optional<Predicate> where;
  std::optional<std::uint64_t> limit;
  std::size_t from_position = 0;

  bool operator==(const QueryAst& o) const {
    return projection == o.projection && from_table == o.from_table && join == o.join &&
           where == o.where && limit == o.limit;
  }
};

}  // namespace logq::sql

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

#include "logq/sql/resolver.hpp"

#include "logq/common/error.hpp"

namespace logq::sql {

namespace {

class Binder {
 public:
  Binder(const ResolvedQuery& q) : q_(q) {}

  BoundColumn bind(const ColumnRef& ref) const {
    if (ref.table) {
      Side side = side_of(*ref.table, ref.position);
      auto ord = q_.table(side)->schema.ordinal_of(ref.column);
      if (!ord) {
        throw Error(ErrorCode::kUnknownColumn,
                    "unknown column " + ref.display() + " at position " + std::to_string(ref.position),
                    ref.position);
      }
      return {side, *ord};
    }
    auto in_left = q_.left->schema.ordinal_of(ref.column);
    std::optional<std::size_t> in_right;
    if (q_.right) in_right = q_.right->schema.ordinal_of(ref.column);
    if (in_left && in_right) {
      throw Error(ErrorCode::kAmbiguousColumn,
                  "column " + ref.column + " exists in both " + q_.left->name() + " and " +
                      q_.right->name() + "; qualify it (position " + std::to_string(ref.position) + ")",
                  ref.position);
    }
    if (in_left) return {Side::kLeft, *in_left};
    if (in_right) return {Side::kRight, *in_right};
    throw Error(ErrorCode::kUnknownColumn,
                "unknown column " + ref.column + " at position " + std::to_string(ref.position),
                ref.position);
  }

  Side side_of(const std::string& table, std::size_t position) const {
    if (table == q_.left->name()) return Side::kLeft;
    if (q_.right && table == q_.right->name()) return Side::kRight;
    throw Error(ErrorCode::kUnknownTable,
                "table " + table + " is not part of this query (position " +
                    std::to_string(position) + ")",
                position);
  }

 private:
  const ResolvedQuery& q_;
};

catalog::TableRef lookup(const catalog::Catalog& catalog, const std::string& name,
                         std::size_t position) {
  auto t = catalog.find(name);
  if (!t) {
    throw Error(ErrorCode::kUnknownTable,
                "unknown table " + name + " at position " + std::to_string(position), position);
  }
  return t;
}

}  // namespace

ResolvedQuery resolve(const QueryAst& ast, const catalog::Catalog& catalog) {
  ResolvedQuery q;
  q.ast = ast;
  q.limit = ast.limit;
  q.left = lookup(catalog, ast.from_table, ast.from_position);
  if (ast.join) {
    if (ast.join->table == ast.from_table) {
      throw Error(ErrorCode::kUnsupported, "self-joins are not supported",
                  ast.join->table_position);
    }
    q.right = lookup(catalog, ast.join->table, ast.join->table_position);
  }
  Binder binder(q);

  if (ast.join) {
    BoundColumn a = binder.bind(ast.join->left);
    BoundColumn b = binder.bind(ast.join->right);
    if (a.side == b.side) {
      throw Error(ErrorCode::kUnsupported, "join condition must compare columns of both tables",
                  ast.join->left.position);
    }
    q.left_key = a.side == Side::kLeft ? a : b;
    q.right_key = a.side == Side::kLeft ? b : a;
  }

  if (std::holds_alternative<CountStar>(ast.projection)) {
    q.count = true;
    q.output.push_back({"count", catalog::ColumnType::kUInt64});
  } else if (std::holds_alternative<Star>(ast.projection)) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      const auto& t = q.table(side);
      if (!t) continue;
      for (std::size_t i = 0; i < t->schema.width(); ++i) {
        q.projection.push_back({side, i});
        const auto& col = t->schema.columns()[i];
        q.output.push_back({q.right ? t->name() + "." + col.name : col.name, col.type});
      }
    }
  } else {
    for (const auto& ref : std::get<std::vector<ColumnRef>>(ast.projection)) {
      BoundColumn b = binder.bind(ref);
      q.projection.push_back(b);
      q.output.push_back({ref.display(), q.table(b.side)->schema.columns()[b.ordinal].type});
    }
  }

  if (ast.where) {
    for (const auto& term : ast.where->terms) {
      q.filter.push_back({binder.bind(term.column), term.op, term.literal});
    }
  }
  return q;
}

}  // namespace logq::sql

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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "logq/sql/ast.hpp"

// Deliberately naive evaluator used as the oracle: whole-file getline
// reading, nested-loop joins, no partitions, no indexes.
namespace logq::testing {

struct RefTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Bytes after the header line; decides which join side drives output order.
  std::uint64_t data_bytes = 0;
};

struct RefResult {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

RefTable ref_table_from_csv(const std::string& text, const std::string& name,
                            const std::vector<std::string>& columns);
RefTable read_ref_table(const std::filesystem::path& path, const std::string& name,
                        const std::vector<std::string>& columns);

// Output order: rows of the driving table in file order; for joins, each
// driving row's matches in the other table's file order. The FROM table
// drives unless it holds fewer data bytes than the JOIN table.
RefResult ref_eval(const sql::QueryAst& ast, const std::map<std::string, RefTable>& tables);

}  // namespace logq::testing

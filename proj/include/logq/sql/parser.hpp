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

#include <string>
#include <string_view>

#include "logq/sql/ast.hpp"

namespace logq::sql {

// Grammar:
//   SELECT (* | COUNT(*) | col [, col]*) FROM t
//     [JOIN t ON t.c = t.c] [WHERE col op 'lit' [AND col op 'lit']*]
//     [LIMIT n] [;]
// Anything not starting with SELECT fails with kNonQuery, as does any text
// after the terminating semicolon. Other failures are kSyntax.
QueryAst parse(std::string_view text);

// Canonical text: upper-case keywords, no trailing semicolon, identifiers
// backquoted only when needed.
std::string render(const QueryAst& ast);

}  // namespace logq::sql

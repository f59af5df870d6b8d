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
#include <vector>

namespace logq::sql {

enum class TokenKind {
  kKeyword,
  kIdentifier,
  kNumber,
  kString,
  kStar,
  kComma,
  kLParen,
  kRParen,
  kDot,
  kSemicolon,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
};

enum class Keyword { kSelect, kFrom, kJoin, kOn, kWhere, kAnd, kLimit, kCount };

struct Token {
  TokenKind kind;
  // Keyword tokens carry the upper-case spelling; identifiers keep their
  // case (backquotes stripped); strings hold the unescaped value.
  std::string text;
  std::size_t position = 0;
  std::optional<Keyword> keyword;

  bool operator==(const Token&) const = default;
};

std::optional<Keyword> keyword_from_word(std::string_view word);
std::string_view keyword_text(Keyword keyword);

// Throws Error(kSyntax) on an unterminated literal or an illegal character,
// carrying the byte offset.
std::vector<Token> tokenize(std::string_view text);

}  // namespace logq::sql

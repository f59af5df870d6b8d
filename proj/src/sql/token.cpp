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

#include "logq/sql/token.hpp"

#include <array>
#include <cctype>
#include <utility>

#include "logq/common/error.hpp"

namespace logq::sql {

namespace {

constexpr std::array<std::pair<Keyword, std::string_view>, 8> kKeywords{{
    {Keyword::kSelect, "SELECT"},
    {Keyword::kFrom, "FROM"},
    {Keyword::kJoin, "JOIN"},
    {Keyword::kOn, "ON"},
    {Keyword::kWhere, "WHERE"},
    {Keyword::kAnd, "AND"},
    {Keyword::kLimit, "LIMIT"},
    {Keyword::kCount, "COUNT"},
}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::optional<Keyword> keyword_from_word(std::string_view word) {
  for (const auto& [kw, text] : kKeywords) {
    if (word.size() != text.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < word.size() && same; ++i) {
      same = std::toupper(static_cast<unsigned char>(word[i])) == text[i];
    }
    if (same) return kw;
  }
  return std::nullopt;
}

std::string_view keyword_text(Keyword keyword) {
  for (const auto& [kw, text] : kKeywords) {
    if (kw == keyword) return text;
  }
  return "";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto punct = [&](TokenKind kind, std::size_t len) {
    out.push_back({kind, std::string(text.substr(i, len)), i, std::nullopt});
    i += len;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string_view word = text.substr(start, i - start);
      if (auto kw = keyword_from_word(word)) {
        out.push_back({TokenKind::kKeyword, std::string(keyword_text(*kw)), start, kw});
      } else {
        out.push_back({TokenKind::kIdentifier, std::string(word), start, std::nullopt});
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({TokenKind::kNumber, std::string(text.substr(start, i - start)), start,
                     std::nullopt});
      continue;
    }
    switch (c) {
      case '`': {
        std::size_t start = i;
        auto close = text.find('`', i + 1);
        if (close == std::string_view::npos) {
          throw Error(ErrorCode::kSyntax, "unterminated quoted identifier", start);
        }
        if (close == i + 1) throw Error(ErrorCode::kSyntax, "empty quoted identifier", start);
        out.push_back({TokenKind::kIdentifier, std::string(text.substr(i + 1, close - i - 1)),
                       start, std::nullopt});
        i = close + 1;
        continue;
      }
      case '\'': {
        std::size_t start = i;
        std::string value;
        ++i;
        for (;;) {
          if (i >= text.size()) {
            throw Error(ErrorCode::kSyntax, "unterminated string literal", start);
          }
          if (text[i] == '\'') {
            if (i + 1 < text.size() && text[i + 1] == '\'') {
              value.push_back('\'');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          value.push_back(text[i++]);
        }
        out.push_back({TokenKind::kString, std::move(value), start, std::nullopt});
        continue;
      }
      case '*': punct(TokenKind::kStar, 1); continue;
      case ',': punct(TokenKind::kComma, 1); continue;
      case '(': punct(TokenKind::kLParen, 1); continue;
      case ')': punct(TokenKind::kRParen, 1); continue;
      case '.': punct(TokenKind::kDot, 1); continue;
      case ';': punct(TokenKind::kSemicolon, 1); continue;
      case '=': punct(TokenKind::kEq, 1); continue;
      case '!':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          punct(TokenKind::kNe, 2);
          continue;
        }
        break;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          punct(TokenKind::kLe, 2);
        } else if (i + 1 < text.size() && text[i + 1] == '>') {
          punct(TokenKind::kNe, 2);
        } else {
          punct(TokenKind::kLt, 1);
        }
        continue;
      case '>':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          punct(TokenKind::kGe, 2);
        } else {
          punct(TokenKind::kGt, 1);
        }
        continue;
      default:
        break;
    }
    std::string shown;
    if (std::isprint(static_cast<unsigned char>(c))) {
      shown = "'" + std::string(1, c) + "'";
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      auto b = static_cast<unsigned char>(c);
      shown = std::string("byte 0x") + kHex[b >> 4] + kHex[b & 0xF];
    }
    throw Error(ErrorCode::kSyntax,
                "illegal character " + shown + " at position " + std::to_string(i), i);
  }
  return out;
}

}  // namespace logq::sql

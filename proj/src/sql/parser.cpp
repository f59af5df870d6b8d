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

#include "logq/sql/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "logq/common/error.hpp"
#include "logq/sql/token.hpp"

namespace logq::sql {

std::string_view op_text(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
  }
  return "=";
}

bool compare(std::string_view value, CompareOp op, std::string_view literal) {
  const int c = value.compare(literal);
  switch (op) {
    case CompareOp::kEq: return c == 0;
    case CompareOp::kNe: return c != 0;
    case CompareOp::kLt: return c < 0;
    case CompareOp::kLe: return c <= 0;
    case CompareOp::kGt: return c > 0;
    case CompareOp::kGe: return c >= 0;
  }
  return false;
}

namespace {

// Offset of a ';' outside quotes that is followed by more than whitespace.
std::optional<std::size_t> second_statement(std::string_view text) {
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;  // a doubled quote reopens on the next byte
    } else if (c == '\'' || c == '`') {
      quote = c;
    } else if (c == ';') {
      for (std::size_t j = i + 1; j < text.size(); ++j) {
        if (!std::isspace(static_cast<unsigned char>(text[j]))) return i;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Rejects anything whose leading word is not SELECT, or that carries a
// second statement, before tokenizing, so statements with exotic syntax are
// still classified as non-queries.
void require_select(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) throw Error(ErrorCode::kSyntax, "empty query", 0);
  std::size_t start = i;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
  auto kw = keyword_from_word(text.substr(start, i - start));
  if (!kw || *kw != Keyword::kSelect) {
    throw Error(ErrorCode::kNonQuery, "only SELECT statements are accepted", start);
  }
  if (auto semi = second_statement(text)) {
    throw Error(ErrorCode::kNonQuery, "only a single statement is accepted", *semi);
  }
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t text_size)
      : tokens_(std::move(tokens)), end_position_(text_size) {}

  QueryAst parse_query() {
    QueryAst ast;
    expect_keyword(Keyword::kSelect);
    ast.projection = parse_projection();
    expect_keyword(Keyword::kFrom);
    ast.from_position = position();
    ast.from_table = expect_identifier("table name");

    if (accept_keyword(Keyword::kJoin)) {
      JoinClause join;
      join.table_position = position();
      join.table = expect_identifier("table name");
      expect_keyword(Keyword::kOn);
      join.left = parse_column(true);
      expect(TokenKind::kEq, "'='");
      join.right = parse_column(true);
      ast.join = std::move(join);
    }
    if (accept_keyword(Keyword::kWhere)) {
      Predicate pred;
      do {
        pred.terms.push_back(parse_comparison());
      } while (accept_keyword(Keyword::kAnd));
      ast.where = std::move(pred);
    }
    if (accept_keyword(Keyword::kLimit)) {
      const Token& t = expect(TokenKind::kNumber, "row count");
      std::uint64_t n = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
      if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        throw Error(ErrorCode::kSyntax, "LIMIT value out of range", t.position);
      }
      ast.limit = n;
    }
    if (peek_kind(TokenKind::kSemicolon)) ++pos_;
    if (pos_ < tokens_.size()) {
      if (pos_ > 0 && tokens_[pos_ - 1].kind == TokenKind::kSemicolon) {
        throw Error(ErrorCode::kNonQuery, "only a single statement is accepted",
                    tokens_[pos_].position);
      }
      fail("end of query");
    }
    return ast;
  }

 private:
  Projection parse_projection() {
    if (peek_kind(TokenKind::kStar)) {
      ++pos_;
      return Star{};
    }
    if (accept_keyword(Keyword::kCount)) {
      expect(TokenKind::kLParen, "'('");
      expect(TokenKind::kStar, "'*'");
      expect(TokenKind::kRParen, "')'");
      if (peek_kind(TokenKind::kComma)) {
        throw Error(ErrorCode::kUnsupported, "COUNT(*) cannot be combined with columns",
                    position());
      }
      return CountStar{};
    }
    std::vector<ColumnRef> cols;
    do {
      if (peek_keyword(Keyword::kCount)) {
        throw Error(ErrorCode::kUnsupported, "COUNT(*) cannot be combined with columns",
                    position());
      }
      cols.push_back(parse_column(false));
    } while (accept(TokenKind::kComma));
    return cols;
  }

  ColumnRef parse_column(bool require_qualifier) {
    ColumnRef ref;
    ref.position = position();
    std::string first = expect_identifier(require_qualifier ? "qualified column" : "column");
    if (accept(TokenKind::kDot)) {
      ref.table = std::move(first);
      ref.column = expect_identifier("column");
    } else {
      if (require_qualifier) {
        throw Error(ErrorCode::kSyntax, "join columns must be written as table.column",
                    ref.position);
      }
      ref.column = std::move(first);
    }
    return ref;
  }

  Comparison parse_comparison() {
    Comparison cmp;
    cmp.column = parse_column(false);
    if (pos_ >= tokens_.size()) fail("comparison operator");
    switch (tokens_[pos_].kind) {
      case TokenKind::kEq: cmp.op = CompareOp::kEq; break;
      case TokenKind::kNe: cmp.op = CompareOp::kNe; break;
      case TokenKind::kLt: cmp.op = CompareOp::kLt; break;
      case TokenKind::kLe: cmp.op = CompareOp::kLe; break;
      case TokenKind::kGt: cmp.op = CompareOp::kGt; break;
      case TokenKind::kGe: cmp.op = CompareOp::kGe; break;
      default: fail("comparison operator");
    }
    ++pos_;
    cmp.literal = expect(TokenKind::kString, "quoted string").text;
    return cmp;
  }

  std::size_t position() const {
    return pos_ < tokens_.size() ? tokens_[pos_].position : end_position_;
  }

  bool peek_kind(TokenKind kind) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == kind;
  }

  bool peek_keyword(Keyword kw) const {
    return peek_kind(TokenKind::kKeyword) && tokens_[pos_].keyword == kw;
  }

  bool accept(TokenKind kind) {
    if (!peek_kind(kind)) return false;
    ++pos_;
    return true;
  }

  bool accept_keyword(Keyword kw) {
    if (!peek_keyword(kw)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (!peek_kind(kind)) fail(what);
    return tokens_[pos_++];
  }

  void expect_keyword(Keyword kw) {
    if (!accept_keyword(kw)) fail(keyword_text(kw));
  }

  std::string expect_identifier(std::string_view what) {
    return expect(TokenKind::kIdentifier, what).text;
  }

  [[noreturn]] void fail(std::string_view expected) const {
    std::string found = pos_ < tokens_.size() ? "'" + tokens_[pos_].text + "'" : "end of input";
    throw Error(ErrorCode::kSyntax,
                "expected " + std::string(expected) + " but found " + found + " at position " +
                    std::to_string(position()),
                position());
  }

  std::vector<Token> tokens_;
  std::size_t end_position_;
  std::size_t pos_ = 0;
};

bool plain_identifier(std::string_view name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
    return false;
  }
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return !keyword_from_word(name).has_value();
}

std::string quote_identifier(std::string_view name) {
  if (plain_identifier(name)) return std::string(name);
  return "`" + std::string(name) + "`";
}

std::string render_column(const ColumnRef& ref) {
  std::string out;
  if (ref.table) out = quote_identifier(*ref.table) + ".";
  return out + quote_identifier(ref.column);
}

std::string quote_literal(std::string_view value) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') out.push_back('\'');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

}  // namespace

QueryAst parse(std::string_view text) {
  require_select(text);
  Parser parser(tokenize(text), text.size());
  return parser.parse_query();
}

std::string render(const QueryAst& ast) {
  std::string out = "SELECT ";
  if (std::holds_alternative<Star>(ast.projection)) {
    out += "*";
  } else if (std::holds_alternative<CountStar>(ast.projection)) {
    out += "COUNT(*)";
  } else {
    const auto& cols = std::get<std::vector<ColumnRef>>(ast.projection);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i != 0) out += ", ";
      out += render_column(cols[i]);
    }
  }
  out += " FROM " + quote_identifier(ast.from_table);
  if (ast.join) {
    out += " JOIN " + quote_identifier(ast.join->table) + " ON " + render_column(ast.join->left) +
           " = " + render_column(ast.join->right);
  }
  if (ast.where) {
    out += " WHERE ";
    for (std::size_t i = 0; i < ast.where->terms.size(); ++i) {
      const auto& t = ast.where->terms[i];
      if (i != 0) out += " AND ";
      out += render_column(t.column) + " " + std::string(op_text(t.op)) + " " +
             quote_literal(t.literal);
    }
  }
  if (ast.limit) out += " LIMIT " + std::to_string(*ast.limit);
  return out;
}

}  // namespace logq::sql

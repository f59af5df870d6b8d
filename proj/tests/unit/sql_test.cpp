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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "logq/catalog/catalog.hpp"
#include "logq/common/error.hpp"
#include "logq/sql/parser.hpp"
#include "logq/sql/resolver.hpp"
#include "logq/sql/token.hpp"
#include "random_instance.hpp"

namespace logq::sql {

namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::kInternal;
}

std::unique_ptr<catalog::Catalog> schema_catalog() {
  auto c = std::make_unique<catalog::Catalog>();
  auto [tfile, tmsg] = catalog::builtin_schemas();
  for (auto& s : {tfile, tmsg}) {
    catalog::TableHandle h;
    h.schema = s;
    h.source = std::make_shared<catalog::MemorySource>("");
    c->register_table(std::move(h));
  }
  return c;
}

ErrorCode resolve_error(std::string_view text) {
  auto c = schema_catalog();
  try {
    resolve(parse(text), *c);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "resolved: " << text;
  return ErrorCode::kInternal;
}

}  // namespace

TEST(TokenizerTest, KeywordsIdentifiersAndLiterals) {
  auto t = tokenize("select `My Col`, x FROM tMsg where a <> 'it''s' and b>=1;");
  ASSERT_GE(t.size(), 15u);
  EXPECT_EQ(t[0].kind, TokenKind::kKeyword);
  EXPECT_EQ(t[0].text, "SELECT");
  EXPECT_EQ(t[1].kind, TokenKind::kIdentifier);
  EXPECT_EQ(t[1].text, "My Col");
  EXPECT_EQ(t[5].text, "tMsg");
  EXPECT_EQ(t[8].kind, TokenKind::kNe);
  EXPECT_EQ(t[9].kind, TokenKind::kString);
  EXPECT_EQ(t[9].text, "it's");
  EXPECT_EQ(t[12].kind, TokenKind::kGe);
  EXPECT_EQ(t.back().kind, TokenKind::kSemicolon);
  EXPECT_EQ(t[9].position, 40u);
}

TEST(TokenizerTest, Errors) {
  EXPECT_THROW(tokenize("select 'open"), Error);
  EXPECT_THROW(tokenize("select `a"), Error);
  EXPECT_THROW(tokenize("select a # b"), Error);
}

TEST(ParserTest, PaperQueries) {
  auto q1 = parse("Select count(*) from tMsg");
  EXPECT_TRUE(std::holds_alternative<CountStar>(q1.projection));
  EXPECT_EQ(q1.from_table, "tMsg");

  auto q2 = parse("Select * from tFile limit 10");
  EXPECT_TRUE(std::holds_alternative<Star>(q2.projection));
  EXPECT_EQ(q2.limit, 10u);

  auto q3 = parse("Select count(*) from tMsg join tFile on tMsg.Filepath = tFile.Filepath");
  ASSERT_TRUE(q3.join.has_value());
  EXPECT_EQ(q3.join->table, "tFile");
  EXPECT_EQ(q3.join->left.display(), "tMsg.Filepath");
  EXPECT_EQ(q3.join->right.display(), "tFile.Filepath");
}

TEST(ParserTest, WhereAndProjection) {
  auto q = parse("SELECT Phone, tFile.Carrier FROM tFile WHERE Carrier = 'AT&T' AND Phone != '' LIMIT 0;");
  auto& cols = std::get<std::vector<ColumnRef>>(q.projection);
  ASSERT_EQ(cols.size(), 2u);
  EXPECT_EQ(cols[1].display(), "tFile.Carrier");
  ASSERT_TRUE(q.where.has_value());
  ASSERT_EQ(q.where->terms.size(), 2u);
  EXPECT_EQ(q.where->terms[0].literal, "AT&T");
  EXPECT_EQ(q.where->terms[1].op, CompareOp::kNe);
  EXPECT_EQ(q.limit, 0u);
}

TEST(ParserTest, NonQueries) {
  for (const char* s : {"INSERT INTO tMsg VALUES ('a')", "DROP TABLE tMsg", "update tFile set a='b'",
                        "  delete from tMsg", "SHOW TABLES", "(SELECT 1)", "WITH x AS (SELECT 1) SELECT 1",
                        "SELECT * FROM tMsg; DROP TABLE tMsg", "select * from tFile;select * from tMsg",
                        "SELECT * FROM tMsg WHERE MsgType = 'x'; DROP TABLE tMsg; --",
                        "SELECT * FROM tFile;;", "SELECT * FROM tFile; #"}) {
    EXPECT_EQ(parse_error(s), ErrorCode::kNonQuery) << s;
  }
  // Semicolons inside literals or quoted names are data, and a single
  // trailing terminator is fine.
  EXPECT_EQ(parse("SELECT * FROM tMsg WHERE MsgType = 'a;b' ;  ").where->terms[0].literal, "a;b");
  EXPECT_EQ(parse("SELECT * FROM tMsg WHERE MsgType = 'it''s;'").where->terms[0].literal, "it's;");
  EXPECT_EQ(parse("SELECT `a;b` FROM tMsg").from_table, "tMsg");
}

TEST(ParserTest, SyntaxErrors) {
  for (const char* s : {"", "   ", "SELECT", "SELECT * FROM", "SELECT * tMsg", "SELECT a, FROM t",
                        "SELECT * FROM t LIMIT -1", "SELECT * FROM t LIMIT 99999999999999999999999",
                        "SELECT * FROM t WHERE a = 1", "SELECT * FROM t JOIN u ON a = b",
                        "SELECT * FROM t WHERE a = 'x' OR b = 'y'"}) {
    auto code = parse_error(s);
    EXPECT_TRUE(code == ErrorCode::kSyntax || code == ErrorCode::kNonQuery) << s;
  }
  EXPECT_EQ(parse_error("SELECT count(*), a FROM t"), ErrorCode::kUnsupported);
}

TEST(ParserTest, ErrorPositionPointsAtOffendingToken) {
  try {
    parse("SELECT * FROM tMsg WHERE");
    FAIL();
  } catch (const Error& e) {
    ASSERT_TRUE(e.position().has_value());
    EXPECT_EQ(*e.position(), 24u);
  }
}

// Printing a random AST with arbitrary case and spacing and parsing it back
// gives the same AST; render() output also reparses to the same AST.
TEST(ParserTest, RoundTripProperty) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    auto ast = testing::random_query(rng);
    const std::string text = testing::print_query(ast, rng);
    QueryAst back;
    ASSERT_NO_THROW(back = parse(text)) << text;
    EXPECT_EQ(back, ast) << text;
    EXPECT_EQ(parse(render(ast)), ast) << render(ast);
  }
}

TEST(ResolverTest, ErrorCodes) {
  EXPECT_EQ(resolve_error("SELECT Phone FROM tMsg"), ErrorCode::kUnknownColumn);
  EXPECT_EQ(resolve_error("SELECT * FROM tNope"), ErrorCode::kUnknownTable);
  EXPECT_EQ(resolve_error("SELECT * FROM tMsg JOIN tNope ON tMsg.Filepath = tNope.Filepath"),
            ErrorCode::kUnknownTable);
  EXPECT_EQ(resolve_error("SELECT Filepath FROM tMsg JOIN tFile ON tMsg.Filepath = tFile.Filepath"),
            ErrorCode::kAmbiguousColumn);
  EXPECT_EQ(resolve_error("SELECT * FROM tMsg JOIN tMsg ON tMsg.Filepath = tMsg.Filepath"),
            ErrorCode::kUnsupported);
  EXPECT_EQ(resolve_error("SELECT * FROM tMsg JOIN tFile ON tMsg.Filepath = tMsg.Timestamp"),
            ErrorCode::kUnsupported);
  EXPECT_EQ(resolve_error("SELECT tFile.Phone FROM tMsg"), ErrorCode::kUnknownTable);
  EXPECT_EQ(resolve_error("SELECT phone FROM tFile"), ErrorCode::kUnknownColumn);
}

TEST(ResolverTest, BindsSidesAndOutputs) {
  auto c = schema_catalog();
  auto r = resolve(parse("SELECT Phone, tMsg.Filepath FROM tMsg JOIN tFile ON tFile.Filepath = "
                         "tMsg.Filepath WHERE MsgType = 'x'"),
                   *c);
  EXPECT_EQ(r.left->name(), "tMsg");
  EXPECT_EQ(r.right->name(), "tFile");
  ASSERT_EQ(r.projection.size(), 2u);
  EXPECT_EQ(r.projection[0], (BoundColumn{Side::kRight, 1}));
  EXPECT_EQ(r.projection[1], (BoundColumn{Side::kLeft, 0}));
  EXPECT_EQ(r.left_key, (BoundColumn{Side::kLeft, 0}));
  EXPECT_EQ(r.right_key, (BoundColumn{Side::kRight, 0}));
  ASSERT_EQ(r.filter.size(), 1u);
  EXPECT_EQ(r.filter[0].column, (BoundColumn{Side::kLeft, 2}));
  EXPECT_EQ(r.output[0].name, "Phone");
  EXPECT_EQ(r.output[1].name, "tMsg.Filepath");
}

TEST(ResolverTest, RandomQueriesResolve) {
  auto c = schema_catalog();
  std::mt19937_64 rng(22);
  for (int i = 0; i < 300; ++i) {
    auto ast = testing::random_query(rng);
    EXPECT_NO_THROW(resolve(ast, *c)) << render(ast);
  }
}

TEST(CompareTest, ByteWiseOrdering) {
  EXPECT_TRUE(compare("10", CompareOp::kLt, "9"));
  EXPECT_TRUE(compare("", CompareOp::kLt, "a"));
  EXPECT_TRUE(compare("B", CompareOp::kLt, "a"));
  EXPECT_TRUE(compare("a", CompareOp::kGe, "a"));
  EXPECT_FALSE(compare("a", CompareOp::kNe, "a"));
}

}  // namespace logq::sql

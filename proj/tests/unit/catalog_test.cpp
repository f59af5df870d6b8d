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
#include <vector>

#include "logq/catalog/catalog.hpp"
#include "logq/common/error.hpp"
#include "logq/common/thread_pool.hpp"
#include "random_instance.hpp"
#include "temp_dir.hpp"

namespace logq::catalog {

namespace {

TableSchema tfile_schema() { return builtin_schemas().first; }
TableSchema tmsg_schema() { return builtin_schemas().second; }

std::shared_ptr<MemorySource> memory(std::string bytes) {
  return std::make_shared<MemorySource>(std::move(bytes));
}

// Naive split of the data lines, independent of the parser.
std::vector<std::vector<std::string>> naive_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = csv.find('\n');
  pos = pos == std::string::npos ? csv.size() : pos + 1;
  while (pos < csv.size()) {
    std::size_t nl = csv.find('\n', pos);
    if (nl == std::string::npos) nl = csv.size();
    std::vector<std::string> fields;
    std::size_t f = pos;
    while (true) {
      std::size_t comma = csv.find(',', f);
      if (comma == std::string::npos || comma > nl) {
        fields.push_back(csv.substr(f, nl - f));
        break;
      }
      fields.push_back(csv.substr(f, comma - f));
      f = comma + 1;
    }
    rows.push_back(fields);
    pos = nl + 1;
  }
  return rows;
}

std::vector<std::vector<std::string>> rows_of(const ColumnarPartition& p) {
  std::vector<std::vector<std::string>> rows(p.row_count());
  for (std::size_t r = 0; r < p.row_count(); ++r) {
    for (std::size_t c = 0; c < p.width(); ++c) rows[r].emplace_back(p.column(c).at(r));
  }
  return rows;
}

}  // namespace

TEST(SchemaTest, BuiltinTables) {
  auto [tfile, tmsg] = builtin_schemas();
  EXPECT_EQ(tfile.name(), "tFile");
  EXPECT_EQ(tfile.width(), 4u);
  EXPECT_EQ(tfile.primary_key(), std::vector<std::string>{"Filepath"});
  EXPECT_EQ(tmsg.name(), "tMsg");
  EXPECT_EQ(tmsg.width(), 6u);
  EXPECT_EQ(tmsg.primary_key(), (std::vector<std::string>{"Filepath", "Timestamp", "LineNo"}));
  EXPECT_EQ(tmsg.ordinal_of("MsgType"), 2u);
  EXPECT_FALSE(tmsg.ordinal_of("msgtype").has_value());
  EXPECT_FALSE(tmsg.ordinal_of("Phone").has_value());
}

TEST(SchemaTest, RejectsBadDefinitions) {
  EXPECT_THROW(TableSchema("t", {}), Error);
  EXPECT_THROW(TableSchema("t", {{"a"}, {"a"}}), Error);
  EXPECT_THROW(TableSchema("t", {{"a"}}, {"b"}), Error);
  EXPECT_THROW(TableSchema("", {{"a"}}), Error);
}

TEST(SchemaTest, ParsesSchemaFile) {
  auto s = parse_schema_file("# comment\ntable tX\nA text\nB varchar\nC uint64\npk A,C\n");
  EXPECT_EQ(s.name(), "tX");
  ASSERT_EQ(s.width(), 3u);
  EXPECT_EQ(s.columns()[2].type, ColumnType::kUInt64);
  EXPECT_EQ(s.primary_key(), (std::vector<std::string>{"A", "C"}));
  EXPECT_THROW(parse_schema_file("A text\n"), Error);
  EXPECT_THROW(parse_schema_file("table t\nA blob\n"), Error);
  EXPECT_THROW(parse_schema_file("table t\nA text extra\n"), Error);
}

TEST(CsvTest, ParsesRowsAndEmptyFields) {
  const std::string data = "/a,LGE,Verizon,2015\n/b,,,\n";
  auto p = parse_csv_range(data, tfile_schema(), 3);
  EXPECT_EQ(p.partition_id(), 3u);
  ASSERT_EQ(p.row_count(), 2u);
  EXPECT_EQ(p.column(1).at(0), "LGE");
  EXPECT_EQ(p.column(1).at(1), "");
  EXPECT_EQ(p.column(3).at(1), "");
  EXPECT_EQ(serialize_partition(p), data);
}

TEST(CsvTest, LastLineWithoutTerminator) {
  auto p = parse_csv_range("/a,b,c,d\n/e,f,g,h", tfile_schema(), 0);
  ASSERT_EQ(p.row_count(), 2u);
  EXPECT_EQ(p.column(3).at(1), "h");
}

TEST(CsvTest, FieldCountMismatchNamesTheLine) {
  try {
    parse_csv_range("/a,b,c,d\n/a,b,c\n", tfile_schema(), 0, {}, {}, 2);
    FAIL() << "expected an ingest error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIngest);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("found 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_csv_range("/a,b,c,d,e\n", tfile_schema(), 0), Error);
}

TEST(CsvTest, ColumnMaskSkipsColumns) {
  ColumnMask mask{false, true, false, false};
  auto p = parse_csv_range("/a,b,c,d\n", tfile_schema(), 0, {}, mask);
  EXPECT_TRUE(p.has_column(1));
  EXPECT_FALSE(p.has_column(0));
  EXPECT_EQ(p.column(1).at(0), "b");
  EXPECT_EQ(p.row_count(), 1u);
}

// Ranges tile [header, size) in order, each ends on a terminator (or EOF),
// and none is smaller than the target unless it is the last.
TEST(CsvTest, SplitCoversDataExactlyProperty) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    auto inst = testing::random_instance(rng, 10, 300);
    std::string csv = inst.tmsg_csv;
    if (round % 3 == 0 && !csv.empty() && csv.back() == '\n') csv.pop_back();
    MemorySource src(csv);
    const std::uint64_t target = 1 + rng() % 3000;
    auto ranges = split_csv(src, target);
    std::uint64_t at = header_length(src);
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      EXPECT_EQ(ranges[i].offset, at);
      EXPECT_GT(ranges[i].length, 0u);
      const std::uint64_t end = ranges[i].end();
      EXPECT_TRUE(end == csv.size() || csv[end - 1] == '\n');
      if (i + 1 < ranges.size()) {
        EXPECT_GE(ranges[i].length, target);
      }
      at = end;
    }
    EXPECT_EQ(at, std::max<std::uint64_t>(csv.size(), header_length(src)));

    std::vector<std::vector<std::string>> all;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      auto part = parse_csv_range(std::string_view(csv).substr(ranges[i].offset, ranges[i].length),
                                  tmsg_schema(), i, ranges[i]);
      auto rows = rows_of(part);
      all.insert(all.end(), rows.begin(), rows.end());
    }
    EXPECT_EQ(all, naive_rows(csv)) << "round " << round;
  }
}

TEST(CsvTest, SplitRejectsZeroTarget) {
  MemorySource src("h\na\n");
  EXPECT_THROW(split_csv(src, 0), Error);
}

TEST(CsvTest, HeaderOnlyHasNoPartitions) {
  MemorySource src("Filepath,Phone,Carrier,Timestamp\n");
  EXPECT_TRUE(split_csv(src, 10).empty());
}

TEST(CsvTest, StreamingMatchesWholeParse) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    auto inst = testing::random_instance(rng, 10, 400);
    MemorySource src(inst.tmsg_csv);
    const ByteRange range{header_length(src), src.size() - header_length(src)};
    auto whole = parse_csv_range(std::string_view(inst.tmsg_csv).substr(range.offset), tmsg_schema(),
                                 0, range);
    std::vector<std::vector<std::string>> streamed;
    std::size_t expect_first = 0;
    stream_csv_range(
        src, range, tmsg_schema(), 0, {},
        [&](const ColumnarPartition& batch, std::size_t first_row) {
          EXPECT_EQ(first_row, expect_first);
          expect_first += batch.row_count();
          auto rows = rows_of(batch);
          streamed.insert(streamed.end(), rows.begin(), rows.end());
          return true;
        },
        1 + rng() % 700);
    EXPECT_EQ(streamed, rows_of(whole));
  }
}

TEST(CsvTest, StreamingStopsWhenSinkDeclines) {
  std::string csv = "h\n";
  for (int i = 0; i < 1000; ++i) csv += std::to_string(i) + "\n";
  MemorySource src(csv);
  TableSchema one("t", {{"v"}});
  std::size_t batches = 0;
  stream_csv_range(src, {2, csv.size() - 2}, one, 0, {},
                   [&](const ColumnarPartition&, std::size_t) { return ++batches < 2; }, 64);
  EXPECT_EQ(batches, 2u);
}

TEST(CatalogTest, LoadCountsRowsPerPartition) {
  std::mt19937_64 rng(9);
  auto inst = testing::random_instance(rng, 10, 900);
  ThreadPool pool(3);
  auto t = load_table(memory(inst.tmsg_csv), tmsg_schema(), 1000, &pool);
  EXPECT_EQ(t.total_rows, inst.tmsg_rows);
  EXPECT_EQ(t.total_bytes, inst.tmsg_csv.size() - inst.tmsg_csv.find('\n') - 1);
  for (std::size_t i = 0; i < t.partitions.size(); ++i) EXPECT_EQ(t.partitions[i].partition_id, i);
  EXPECT_FALSE(t.cached);
}

TEST(CatalogTest, MaterializeKeepsDescriptorsAndIds) {
  std::mt19937_64 rng(10);
  auto inst = testing::random_instance(rng, 10, 500);
  auto t = std::make_shared<const TableHandle>(
      load_table(memory(inst.tmsg_csv), tmsg_schema(), 700));
  // A worker-style handle holding only odd partitions.
  auto subset = std::make_shared<TableHandle>(*t);
  subset->partitions.clear();
  for (const auto& d : t->partitions) {
    if (d.partition_id % 2 == 1) subset->partitions.push_back(d);
  }
  auto cached = materialize(subset);
  ASSERT_TRUE(cached->cached);
  ASSERT_EQ(cached->resident.size(), subset->partitions.size());
  for (std::size_t i = 0; i < cached->resident.size(); ++i) {
    EXPECT_EQ(cached->resident[i]->partition_id(), subset->partitions[i].partition_id);
    EXPECT_EQ(cached->resident[i]->row_count(), subset->partitions[i].row_count);
  }
}

TEST(CatalogTest, RegisterFindCacheDrop) {
  testing::TempDir dir;
  dir.write("tFile.csv", "Filepath,Phone,Carrier,Timestamp\n/a,p,c,t\n/b,p,c,t\n");
  Catalog catalog;
  catalog.register_table(load_table(dir / "tFile.csv", tfile_schema()));
  EXPECT_THROW(catalog.register_table(load_table(dir / "tFile.csv", tfile_schema())), Error);
  EXPECT_EQ(catalog.get("tFile")->total_rows, 2u);
  EXPECT_EQ(catalog.find("tMsg"), nullptr);
  try {
    catalog.get("tMsg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTable);
  }
  auto cached = catalog.cache_table("tFile");
  EXPECT_TRUE(cached->cached);
  EXPECT_EQ(catalog.cache_table("tFile"), cached);
  EXPECT_GT(catalog.cached_bytes(), 0u);
  catalog.drop_table("tFile");
  EXPECT_TRUE(catalog.tables().empty());
}

TEST(CatalogTest, CacheBudgetExceededLeavesTableUncached) {
  testing::TempDir dir;
  dir.write("tFile.csv", "Filepath,Phone,Carrier,Timestamp\n/a,p,c,t\n/b,p,c,t\n");
  Catalog catalog(CatalogOptions{.cache_budget_bytes = 8});
  catalog.register_table(load_table(dir / "tFile.csv", tfile_schema()));
  try {
    catalog.cache_table("tFile");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfMemory);
  }
  EXPECT_FALSE(catalog.get("tFile")->cached);
}

TEST(CatalogTest, MaterializeDetectsChangedFile) {
  testing::TempDir dir;
  dir.write("tFile.csv", "Filepath,Phone,Carrier,Timestamp\n/a,p,c,t\n/b,p,c,t\n");
  auto t = std::make_shared<const TableHandle>(load_table(dir / "tFile.csv", tfile_schema()));
  dir.write("tFile.csv", "Filepath,Phone,Carrier,Timestamp\n/a,p,c,t\n/b,p,c,t,x\n");
  EXPECT_THROW(materialize(t), Error);
}

TEST(CatalogTest, MissingFileIsIoError) {
  try {
    load_table(std::filesystem::path("/nonexistent/tFile.csv"), tfile_schema());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace logq::catalog

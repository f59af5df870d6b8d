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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logq/catalog/catalog.hpp"
#include "logq/engine/plan.hpp"

namespace logq::bench {

struct BenchQuery {
  std::string label;
  std::string sql;
};

// The three benchmark queries Q1..Q3.
const std::vector<BenchQuery>& standard_queries();

// "disk-single", "cached-single", "disk-cluster:W" or "cached-cluster:W".
struct ModeSpec {
  engine::StorageMode storage = engine::StorageMode::kCached;
  std::size_t workers = 0;  // 0 for single-process modes
  std::string label() const;
};
ModeSpec parse_mode_spec(std::string_view text);
// Comma-separated list; throws Error(kBadRequest).
std::vector<ModeSpec> parse_mode_list(std::string_view text);

struct BenchConfig {
  std::filesystem::path data;
  std::vector<ModeSpec> modes;
  std::vector<BenchQuery> queries = standard_queries();
  std::size_t reps = 3;
  std::uint64_t partition_bytes = catalog::kDefaultPartitionBytes;
  // Fragment threads in single-process modes; 0 means all cores.
  std::size_t parallelism = 0;
  std::uint32_t worker_cores = 1;
  // Off by default so COUNT(*) is timed as a scan, not a catalog lookup.
  bool metadata_count = false;
};

struct BenchRow {
  std::string mode;
  std::string query;
  double elapsed_ms = 0.0;  // median
  std::vector<double> samples_ms;
  std::string digest;
};

struct BenchReport {
  std::vector<std::string> modes;
  std::vector<std::string> queries;
  std::vector<BenchRow> rows;
  std::size_t cores = 0;
  std::uint64_t partition_bytes = 0;
  std::uint32_t worker_cores = 0;
  std::string simd;

  const BenchRow* find(std::string_view mode, std::string_view query) const;
};

// Runs every query in every mode, sequentially by mode. Cached modes get one
// discarded warm-up run per query. Throws Error(kInternal) when any two runs
// of a query disagree on the result digest.
BenchReport run_suite(const BenchConfig& config);

enum class ReportFormat { kText, kCsv };
std::string render_report(const BenchReport& report, ReportFormat format);

double median(std::vector<double> values);

}  // namespace logq::bench

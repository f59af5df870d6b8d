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

#include "logq/bench/suite.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <cstdio>
#include <map>
#include <memory>

#include "logq/cluster/coordinator.hpp"
#include "logq/cluster/worker.hpp"
#include "logq/common/error.hpp"
#include "logq/common/log.hpp"
#include "logq/engine/executor.hpp"
#include "logq/simd/kernels.hpp"
#include "logq/sql/parser.hpp"
#include "logq/sql/resolver.hpp"

namespace logq::bench {

const std::vector<BenchQuery>& standard_queries() {
  static const std::vector<BenchQuery> queries = {
      {"Query 1", "Select count(*) from tMsg"},
      {"Query 2", "Select * from tFile limit 10"},
      {"Query 3", "Select count(*) from tMsg join tFile on tMsg.Filepath = tFile.Filepath"},
  };
  return queries;
}

std::string ModeSpec::label() const {
  std::string out(engine::mode_name(storage));
  if (workers == 0) return out + "-single";
  return out + "-cluster:" + std::to_string(workers);
}

ModeSpec parse_mode_spec(std::string_view text) {
  ModeSpec spec;
  auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw Error(ErrorCode::kBadRequest, "bad mode '" + std::string(text) + "'");
  }
  auto storage = engine::mode_from_name(text.substr(0, dash));
  if (!storage) throw Error(ErrorCode::kBadRequest, "bad mode '" + std::string(text) + "'");
  spec.storage = *storage;
  auto rest = text.substr(dash + 1);
  if (rest == "single") return spec;
  constexpr std::string_view kCluster = "cluster:";
  if (rest.substr(0, kCluster.size()) == kCluster) {
    auto digits = rest.substr(kCluster.size());
    std::size_t w = 0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), w);
    if (ec == std::errc() && end == digits.data() + digits.size() && w > 0 && w <= 64) {
      spec.workers = w;
      return spec;
    }
  }
  throw Error(ErrorCode::kBadRequest, "bad mode '" + std::string(text) +
                                          "' (expected disk-single, cached-single, "
                                          "disk-cluster:W or cached-cluster:W)");
}

std::vector<ModeSpec> parse_mode_list(std::string_view text) {
  std::vector<ModeSpec> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    if (!item.empty()) out.push_back(parse_mode_spec(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

const BenchRow* BenchReport::find(std::string_view mode, std::string_view query) const {
  for (const auto& r : rows) {
    if (r.mode == mode && r.query == query) return &r;
  }
  return nullptr;
}

namespace {

using RunFn = std::function<engine::QueryResult(const std::string& sql)>;

void measure(const BenchConfig& config, const ModeSpec& mode, const RunFn& run,
             BenchReport& report) {
  const bool warm_up = mode.storage == engine::StorageMode::kCached;
  for (const auto& q : config.queries) {
    BenchRow row;
    row.mode = mode.label();
    row.query = q.label;
    if (warm_up) row.digest = engine::digest(run(q.sql));
    for (std::size_t r = 0; r < config.reps; ++r) {
      auto result = run(q.sql);
      const std::string d = engine::digest(result);
      if (!row.digest.empty() && d != row.digest) {
        throw Error(ErrorCode::kInternal, "digest mismatch: " + q.label + " in " + row.mode +
                                              " changed between runs");
      }
      row.digest = d;
      row.samples_ms.push_back(result.elapsed_ms);
    }
    row.elapsed_ms = median(row.samples_ms);
    report.rows.push_back(std::move(row));
  }
}

void run_single(const BenchConfig& config, const ModeSpec& mode, BenchReport& report) {
  engine::ExecOptions exec;
  exec.parallelism = config.parallelism;
  exec.plan.allow_metadata_count = config.metadata_count;
  ThreadPool pool(config.parallelism != 0 ? config.parallelism : default_parallelism());
  catalog::Catalog cat;
  auto [tfile, tmsg] = catalog::builtin_schemas();
  for (const auto& schema : {tfile, tmsg}) {
    cat.register_table(catalog::load_table(config.data / (schema.name() + ".csv"), schema,
                                           config.partition_bytes, &pool));
    if (mode.storage == engine::StorageMode::kCached) cat.cache_table(schema.name(), &pool);
  }
  engine::LocalExecutor executor(exec);
  measure(config, mode,
          [&](const std::string& sql) {
            auto resolved = sql::resolve(sql::parse(sql), cat);
            return executor.execute(resolved, cat, mode.storage);
          },
          report);
}

void run_cluster(const BenchConfig& config, const ModeSpec& mode, BenchReport& report) {
  cluster::CoordinatorConfig cc;
  cc.data_root = config.data;
  cc.partition_bytes = config.partition_bytes;
  cc.plan.allow_metadata_count = config.metadata_count;
  cc.default_mode = mode.storage;
  cluster::Coordinator coordinator(cc);
  coordinator.start();
  std::vector<std::unique_ptr<cluster::Worker>> workers;
  for (std::size_t i = 0; i < mode.workers; ++i) {
    cluster::WorkerConfig wc;
    wc.coordinator = coordinator.address();
    wc.cores = config.worker_cores;
    wc.data_root = config.data;
    wc.worker_id = "bench-" + std::to_string(i);
    workers.push_back(std::make_unique<cluster::Worker>(wc));
    workers.back()->start();
  }
  if (coordinator.wait_for_workers(mode.workers, std::chrono::seconds(30)) < mode.workers) {
    throw Error(ErrorCode::kNoWorkers, "workers did not register for " + mode.label());
  }
  const bool cache = mode.storage == engine::StorageMode::kCached;
  coordinator.load_table("tFile", "tFile.csv", std::nullopt, cache);
  coordinator.load_table("tMsg", "tMsg.csv", std::nullopt, cache);
  measure(config, mode,
          [&](const std::string& sql) { return coordinator.submit(sql, mode.storage); }, report);
  coordinator.stop();
  for (auto& w : workers) w->wait();
}

}  // namespace

BenchReport run_suite(const BenchConfig& config) {
  BenchReport report;
  report.cores = default_parallelism();
  report.partition_bytes = config.partition_bytes;
  report.worker_cores = config.worker_cores;
  report.simd = std::string(simd::isa_name(simd::active().isa));
  for (const auto& q : config.queries) report.queries.push_back(q.label);
  for (const auto& mode : config.modes) {
    report.modes.push_back(mode.label());
    log_info("bench", "running " + mode.label());
    if (mode.workers == 0) {
      run_single(config, mode, report);
    } else {
      run_cluster(config, mode, report);
    }
  }
  // Every mode must agree with the first one on every query.
  std::map<std::string, const BenchRow*> reference;
  for (const auto& row : report.rows) {
    auto [it, inserted] = reference.emplace(row.query, &row);
    if (!inserted && it->second->digest != row.digest) {
      throw Error(ErrorCode::kInternal, "digest mismatch on " + row.query + ": " +
                                            it->second->mode + " gave " + it->second->digest +
                                            ", " + row.mode + " gave " + row.digest);
    }
  }
  return report;
}

std::string render_report(const BenchReport& report, ReportFormat format) {
  auto seconds = [](double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", ms / 1000.0);
    return std::string(buf);
  };
  std::string out;
  if (format == ReportFormat::kCsv) {
    out = "Mode";
    for (const auto& q : report.queries) out += "," + q;
    out += '\n';
    for (const auto& m : report.modes) {
      out += m;
      for (const auto& q : report.queries) {
        const BenchRow* row = report.find(m, q);
        out += "," + (row != nullptr ? seconds(row->elapsed_ms) : std::string("-"));
      }
      out += '\n';
    }
    return out;
  }
  std::size_t width = 4;
  for (const auto& m : report.modes) width = std::max(width, m.size());
  auto pad_right = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  auto pad_left = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  out = pad_right("Mode", width);
  for (const auto& q : report.queries) out += "  " + pad_left(q, 9);
  out += '\n';
  for (const auto& m : report.modes) {
    out += pad_right(m, width);
    for (const auto& q : report.queries) {
      const BenchRow* row = report.find(m, q);
      std::string cell = row != nullptr ? seconds(row->elapsed_ms) + " s" : "-";
      out += "  " + pad_left(cell, 9);
    }
    out += '\n';
  }
  out += "\ncores " + std::to_string(report.cores) + ", partition bytes " +
         std::to_string(report.partition_bytes) + ", worker cores " +
         std::to_string(report.worker_cores) + ", simd " + report.simd + "\n";
  return out;
}

}  // namespace logq::bench

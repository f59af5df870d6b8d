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

#include <atomic>
#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "logq/bench/generator.hpp"
#include "logq/bench/suite.hpp"
#include "logq/cluster/client.hpp"
#include "logq/cluster/coordinator.hpp"
#include "logq/cluster/worker.hpp"
#include "logq/common/log.hpp"
#include "logq/service/http.hpp"
#include "logq/service/service.hpp"

namespace {

using namespace logq;

// Blocks SIGINT/SIGTERM in every thread started afterwards so the main
// thread can collect them with sigwait.
sigset_t block_stop_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void wait_for_stop_signal(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

int fail(const Error& e) {
  std::cerr << "logq: " << code_name(e.code()) << ": " << e.what() << '\n';
  return 1;
}

std::optional<engine::StorageMode> mode_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto mode = service::parse_mode(text);
  if (!mode) throw Error(ErrorCode::kBadRequest, "mode must be cached or disk");
  return mode;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logq: distributed SQL-subset queries over CSV log tables"};
  app.require_subcommand(1);

  // coordinator
  std::string coord_listen = "0.0.0.0:7077";
  std::string coord_root = ".";
  int heartbeat_ms = 2000;
  int timeout_s = 60;
  std::uint64_t partition_mb = 64;
  std::uint64_t broadcast_mb = 256;
  std::uint64_t row_cap = service::kDefaultRowCap;
  std::size_t expect_workers = 0;
  auto* coord = app.add_subcommand("coordinator", "Run the coordinator");
  coord->add_option("--listen", coord_listen, "host:port to accept workers and clients on")
      ->capture_default_str();
  coord->add_option("--data-root", coord_root, "Directory holding the CSV sources")
      ->capture_default_str();
  coord->add_option("--heartbeat-ms", heartbeat_ms, "Worker heartbeat interval")->capture_default_str();
  coord->add_option("--timeout-s", timeout_s, "Query timeout")->capture_default_str();
  coord->add_option("--partition-mb", partition_mb, "Target partition size")->capture_default_str();
  coord->add_option("--broadcast-mb", broadcast_mb, "Tables up to this size go to every worker")
      ->capture_default_str();
  coord->add_option("--row-cap", row_cap, "Largest row result returned")->capture_default_str();
  coord->add_option("--expect-workers", expect_workers,
                    "Once this many workers registered, load and cache tFile.csv and tMsg.csv");

  // worker
  std::string worker_coord;
  std::uint32_t worker_cores = 1;
  std::string worker_root = ".";
  std::string worker_id;
  auto* worker = app.add_subcommand("worker", "Run a worker");
  worker->add_option("--coordinator", worker_coord, "Coordinator host:port")->required();
  worker->add_option("--cores", worker_cores, "Fragments run concurrently")->capture_default_str();
  worker->add_option("--data-root", worker_root, "Directory holding the CSV sources")
      ->capture_default_str();
  worker->add_option("--id", worker_id, "Worker id (default host-pid-n)");
  worker->add_option("--heartbeat-ms", heartbeat_ms, "Heartbeat interval")->capture_default_str();

  // serve
  std::string serve_listen = "127.0.0.1:8080";
  std::string serve_coord;
  bool serve_embedded = false;
  std::string serve_root = ".";
  std::string serve_static;
  std::size_t max_sql = service::kDefaultMaxSqlBytes;
  auto* serve = app.add_subcommand("serve", "Run the HTTP query service");
  serve->add_option("--listen", serve_listen, "host:port for HTTP")->capture_default_str();
  auto* serve_coord_opt = serve->add_option("--coordinator", serve_coord, "Coordinator host:port");
  auto* serve_embedded_opt =
      serve->add_flag("--embedded", serve_embedded, "Execute in-process instead of on a cluster");
  serve_coord_opt->excludes(serve_embedded_opt);
  serve->add_option("--data-root", serve_root, "Embedded mode: directory with tFile.csv/tMsg.csv")
      ->capture_default_str();
  serve->add_option("--static", serve_static, "Directory served at /");
  serve->add_option("--partition-mb", partition_mb, "Embedded mode partition size")
      ->capture_default_str();
  serve->add_option("--row-cap", row_cap, "Embedded mode row cap")->capture_default_str();
  serve->add_option("--max-sql-bytes", max_sql, "Longest accepted query")->capture_default_str();

  // load
  std::string load_coord;
  std::string load_table;
  std::string load_source;
  bool load_no_cache = false;
  auto* load = app.add_subcommand("load", "Ask the coordinator to distribute a table");
  load->add_option("--coordinator", load_coord, "Coordinator host:port")->required();
  load->add_option("--table", load_table, "tFile or tMsg")->required();
  load->add_option("--source", load_source, "File name under the data root (default <table>.csv)");
  load->add_flag("--no-cache", load_no_cache, "Distribute without caching");

  // query
  std::string query_coord;
  std::string query_mode;
  std::string query_sql;
  auto* query = app.add_subcommand("query", "Run one query against a coordinator");
  query->add_option("--coordinator", query_coord, "Coordinator host:port")->required();
  query->add_option("--mode", query_mode, "cached or disk");
  query->add_option("sql", query_sql, "Query text")->required();

  // gen
  bench::GenSpec gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate tFile.csv and tMsg.csv");
  gen->add_option("--tfile", gen_spec.tfile_rows, "tFile rows")->capture_default_str();
  gen->add_option("--tmsg", gen_spec.tmsg_rows, "tMsg rows")->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  // bench
  std::string bench_data;
  std::string bench_modes = "disk-single,cached-single";
  std::size_t bench_reps = 3;
  std::string bench_format = "text";
  std::size_t bench_parallelism = 0;
  std::uint32_t bench_worker_cores = 1;
  bool bench_metadata = false;
  auto* bench_cmd = app.add_subcommand("bench", "Time the three benchmark queries per mode");
  bench_cmd->add_option("--data", bench_data, "Directory from logq gen")->required();
  bench_cmd->add_option("--modes", bench_modes,
                        "disk-single,cached-single,disk-cluster:W,cached-cluster:W")
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench_reps, "Timed runs per query (median reported)")
      ->capture_default_str();
  bench_cmd->add_option("--format", bench_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  bench_cmd->add_option("--partition-mb", partition_mb, "Target partition size")
      ->capture_default_str();
  bench_cmd->add_option("--parallelism", bench_parallelism,
                        "Single-process fragment threads (0 = all cores)");
  bench_cmd->add_option("--worker-cores", bench_worker_cores, "Cores per in-process worker")
      ->capture_default_str();
  bench_cmd->add_flag("--metadata-count", bench_metadata,
                      "Answer COUNT(*) from partition row counts when cached");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*coord) {
      cluster::CoordinatorConfig config;
      config.listen = coord_listen;
      config.data_root = coord_root;
      config.heartbeat_interval = std::chrono::milliseconds(heartbeat_ms);
      config.query_timeout = std::chrono::seconds(timeout_s);
      config.partition_bytes = partition_mb << 20;
      config.plan.broadcast_threshold_bytes = broadcast_mb << 20;
      config.plan.row_cap = row_cap;
      config.default_mode = service::mode_from_env(engine::StorageMode::kCached);
      const sigset_t signals = block_stop_signals();
      cluster::Coordinator coordinator(config);
      coordinator.start();
      std::atomic<bool> quit{false};
      std::thread loader;
      if (expect_workers > 0) {
        loader = std::thread([&] {
          while (coordinator.wait_for_workers(expect_workers, std::chrono::seconds(1)) <
                 expect_workers) {
            if (quit.load()) return;
          }
          try {
            coordinator.load_table("tFile", "tFile.csv");
            coordinator.load_table("tMsg", "tMsg.csv");
          } catch (const Error& e) {
            log_info("coordinator", std::string("initial load failed: ") + e.what());
          }
        });
      }
      wait_for_stop_signal(signals);
      quit.store(true);
      coordinator.stop();
      if (loader.joinable()) loader.join();
      return 0;
    }
    if (*worker) {
      cluster::WorkerConfig config;
      config.coordinator = worker_coord;
      config.cores = worker_cores;
      config.data_root = worker_root;
      config.worker_id = worker_id;
      config.heartbeat_interval = std::chrono::milliseconds(heartbeat_ms);
      const sigset_t signals = block_stop_signals();
      cluster::Worker w(config);
      w.start();
      std::thread stopper([&] {
        wait_for_stop_signal(signals);
        w.stop();
      });
      int code = w.wait();
      // Wake the signal waiter if the worker ended on its own.
      if (stopper.joinable()) {
        pthread_kill(stopper.native_handle(), SIGTERM);
        stopper.join();
      }
      return code;
    }
    if (*serve) {
      if (!serve_embedded && serve_coord.empty()) {
        std::cerr << "logq serve: pass --coordinator H:P or --embedded\n";
        return 2;
      }
      service::ServiceOptions options;
      options.max_sql_bytes = max_sql;
      options.default_mode = service::mode_from_env(engine::StorageMode::kCached);
      std::unique_ptr<service::QueryBackend> backend;
      if (serve_embedded) {
        service::EmbeddedOptions eo;
        eo.partition_bytes = partition_mb << 20;
        eo.exec.plan.row_cap = row_cap;
        backend = service::EmbeddedBackend::from_data_root(serve_root, eo);
      } else {
        backend = std::make_unique<service::ClusterBackend>(serve_coord);
      }
      const sigset_t signals = block_stop_signals();
      service::QueryService svc(std::move(backend), options);
      service::HttpOptions http;
      http.listen = serve_listen;
      http.static_dir = serve_static;
      service::HttpServer server(svc, http);
      server.start();
      wait_for_stop_signal(signals);
      server.stop();
      return 0;
    }
    if (*load) {
      cluster::ClusterClient client(load_coord);
      client.load(load_table, load_source.empty() ? load_table + ".csv" : load_source, std::nullopt,
                  !load_no_cache);
      std::cout << "loaded " << load_table << '\n';
      return 0;
    }
    if (*query) {
      cluster::ClusterClient client(query_coord);
      auto result = client.submit(query_sql, mode_option(query_mode));
      for (std::size_t i = 0; i < result.columns.size(); ++i) {
        std::cout << (i ? "\t" : "") << result.columns[i];
      }
      std::cout << '\n';
      for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "\t" : "") << row[i];
        std::cout << '\n';
      }
      std::cerr << result.row_count << " rows, " << result.elapsed_ms << " ms, " << result.mode
                << '\n';
      return 0;
    }
    if (*gen) {
      auto truth = bench::generate(gen_spec, gen_out);
      std::cout << truth.to_json().dump(2) << '\n';
      return 0;
    }
    if (*bench_cmd) {
      bench::BenchConfig config;
      config.data = bench_data;
      config.modes = bench::parse_mode_list(bench_modes);
      config.reps = bench_reps;
      config.partition_bytes = partition_mb << 20;
      config.parallelism = bench_parallelism;
      config.worker_cores = bench_worker_cores;
      config.metadata_count = bench_metadata;
      bench::BenchReport report;
      try {
        report = bench::run_suite(config);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInternal) {
          std::cerr << "logq bench: " << e.what() << '\n';
          return 3;
        }
        throw;
      }
      std::cout << bench::render_report(report, bench_format == "csv" ? bench::ReportFormat::kCsv
                                                                      : bench::ReportFormat::kText);
      return 0;
    }
  } catch (const Error& e) {
    return fail(e);
  }
  return 0;
}

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

#include "logq/service/backend.hpp"

#include "logq/cluster/wire.hpp"
#include "logq/common/log.hpp"
#include "logq/sql/resolver.hpp"

namespace logq::service {

EmbeddedBackend::EmbeddedBackend(std::shared_ptr<catalog::Catalog> catalog,
                                 engine::ExecOptions options)
    : catalog_(std::move(catalog)), executor_(options) {}

std::unique_ptr<EmbeddedBackend> EmbeddedBackend::from_data_root(const std::filesystem::path& root,
                                                                 const EmbeddedOptions& options) {
  auto cat = std::make_shared<catalog::Catalog>();
  ThreadPool pool(options.exec.parallelism != 0 ? options.exec.parallelism : default_parallelism());
  auto [tfile, tmsg] = catalog::builtin_schemas();
  for (const auto& schema : {tfile, tmsg}) {
    const auto path = root / (schema.name() + ".csv");
    if (!std::filesystem::exists(path)) {
      log_info("serve", "no " + path.string() + ", table " + schema.name() + " not loaded");
      continue;
    }
    cat->register_table(catalog::load_table(path, schema, options.partition_bytes, &pool));
    if (options.cache) cat->cache_table(schema.name(), &pool);
    log_info("serve", "loaded " + schema.name() + " from " + path.string());
  }
  return std::make_unique<EmbeddedBackend>(std::move(cat), options.exec);
}

sql::ResolvedQuery EmbeddedBackend::resolve(const sql::QueryAst& ast) {
  return sql::resolve(ast, *catalog_);
}

engine::QueryResult EmbeddedBackend::execute(std::string_view, const sql::ResolvedQuery& query,
                                             engine::StorageMode mode) {
  ++running_;
  try {
    auto result = executor_.execute(query, *catalog_, mode);
    --running_;
    return result;
  } catch (...) {
    --running_;
    throw;
  }
}

nlohmann::json EmbeddedBackend::status() {
  using nlohmann::json;
  json tables = json::array();
  json cached = json::array();
  for (const auto& t : catalog_->tables()) {
    tables.push_back({{"name", t->name()},
                      {"rows", t->total_rows},
                      {"bytes", t->total_bytes},
                      {"partitions", t->partitions.size()},
                      {"cached", t->cached},
                      {"schema", cluster::schema_to_json(t->schema)}});
    if (t->cached) cached.push_back(t->name());
  }
  const auto cores = executor_.options().parallelism != 0 ? executor_.options().parallelism
                                                          : default_parallelism();
  const int running = running_.load();
  return {{"mode", "embedded"},
          {"workers", 1},
          {"total_cores", cores},
          {"used_cores", running > 0 ? cores : 0},
          {"tables", tables},
          {"cached_tables", cached},
          {"running_queries", running}};
}

ClusterBackend::ClusterBackend(std::string coordinator)
    : coordinator_(std::move(coordinator)), schemas_(std::make_shared<catalog::Catalog>()) {
  auto [tfile, tmsg] = catalog::builtin_schemas();
  for (const auto& schema : {tfile, tmsg}) {
    catalog::TableHandle handle;
    handle.schema = schema;
    schemas_->register_table(std::move(handle));
  }
}

std::unique_ptr<cluster::ClusterClient> ClusterBackend::take_client() {
  {
    std::lock_guard lock(mu_);
    if (!idle_.empty()) {
      auto client = std::move(idle_.back());
      idle_.pop_back();
      return client;
    }
  }
  try {
    return std::make_unique<cluster::ClusterClient>(coordinator_);
  } catch (const Error& e) {
    throw Error(ErrorCode::kNoWorkers, std::string("coordinator unreachable: ") + e.what());
  }
}

void ClusterBackend::give_back(std::unique_ptr<cluster::ClusterClient> client) {
  std::lock_guard lock(mu_);
  idle_.push_back(std::move(client));
}

void ClusterBackend::refresh_schemas(const nlohmann::json& status) {
  auto fresh = std::make_shared<catalog::Catalog>();
  auto [tfile, tmsg] = catalog::builtin_schemas();
  std::map<std::string, catalog::TableSchema> schemas{{tfile.name(), tfile}, {tmsg.name(), tmsg}};
  if (status.contains("tables")) {
    for (const auto& t : status["tables"]) {
      if (t.contains("schema")) {
        auto schema = cluster::schema_from_json(t["schema"]);
        schemas[schema.name()] = schema;
      }
    }
  }
  for (auto& [name, schema] : schemas) {
    catalog::TableHandle handle;
    handle.schema = schema;
    fresh->register_table(std::move(handle));
  }
  std::lock_guard lock(mu_);
  schemas_ = std::move(fresh);
}

sql::ResolvedQuery ClusterBackend::resolve(const sql::QueryAst& ast) {
  std::shared_ptr<catalog::Catalog> schemas;
  {
    std::lock_guard lock(mu_);
    schemas = schemas_;
  }
  try {
    return sql::resolve(ast, *schemas);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnknownTable) throw;
  }
  // The coordinator may know tables loaded after the last refresh.
  status();
  {
    std::lock_guard lock(mu_);
    schemas = schemas_;
  }
  return sql::resolve(ast, *schemas);
}

engine::QueryResult ClusterBackend::execute(std::string_view sql, const sql::ResolvedQuery&,
                                            engine::StorageMode mode) {
  auto client = take_client();
  try {
    auto result = client->submit(sql, mode);
    give_back(std::move(client));
    return result;
  } catch (const Error& e) {
    // The connection stays usable after an error reply, not after I/O loss.
    if (e.code() != ErrorCode::kIo && e.code() != ErrorCode::kProtocol) give_back(std::move(client));
    if (e.code() == ErrorCode::kIo) {
      throw Error(ErrorCode::kNoWorkers, std::string("coordinator connection lost: ") + e.what());
    }
    throw;
  }
}

nlohmann::json ClusterBackend::status() {
  auto client = take_client();
  nlohmann::json doc;
  try {
    doc = client->status();
  } catch (const Error& e) {
    throw Error(ErrorCode::kNoWorkers, std::string("coordinator unreachable: ") + e.what());
  }
  give_back(std::move(client));
  refresh_schemas(doc);
  return doc;
}

}  // namespace logq::service

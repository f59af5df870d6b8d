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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "logq/catalog/catalog.hpp"
#include "logq/cluster/client.hpp"
#include "logq/engine/executor.hpp"

namespace logq::service {

// Where validated queries go.
class QueryBackend {
 public:
  virtual ~QueryBackend() = default;
  // Binds names; never executes anything.
  virtual sql::ResolvedQuery resolve(const sql::QueryAst& ast) = 0;
  virtual engine::QueryResult execute(std::string_view sql, const sql::ResolvedQuery& query,
                                      engine::StorageMode mode) = 0;
  virtual nlohmann::json status() = 0;
};

struct EmbeddedOptions {
  engine::ExecOptions exec;
  std::uint64_t partition_bytes = catalog::kDefaultPartitionBytes;
  bool cache = true;
};

// In-process engine over a local catalog.
class EmbeddedBackend final : public QueryBackend {
 public:
  EmbeddedBackend(std::shared_ptr<catalog::Catalog> catalog, engine::ExecOptions options = {});
  // Loads tFile.csv and tMsg.csv from the root (whichever exist) and caches
  // them when options.cache is set.
  static std::unique_ptr<EmbeddedBackend> from_data_root(const std::filesystem::path& root,
                                                         const EmbeddedOptions& options = {});

  sql::ResolvedQuery resolve(const sql::QueryAst& ast) override;
  engine::QueryResult execute(std::string_view sql, const sql::ResolvedQuery& query,
                              engine::StorageMode mode) override;
  nlohmann::json status() override;
  catalog::Catalog& catalog() { return *catalog_; }

 private:
  std::shared_ptr<catalog::Catalog> catalog_;
  engine::LocalExecutor executor_;
  std::atomic<int> running_{0};
};

// Forwards to a coordinator. Validation uses table schemas fetched from the
// coordinator's status document.
class ClusterBackend final : public QueryBackend {
 public:
  explicit ClusterBackend(std::string coordinator);

  sql::ResolvedQuery resolve(const sql::QueryAst& ast) override;
  engine::QueryResult execute(std::string_view sql, const sql::ResolvedQuery& query,
                              engine::StorageMode mode) override;
  nlohmann::json status() override;

 private:
  std::unique_ptr<cluster::ClusterClient> take_client();
  void give_back(std::unique_ptr<cluster::ClusterClient> client);
  void refresh_schemas(const nlohmann::json& status);

  std::string coordinator_;
  std::mutex mu_;
  std::vector<std::unique_ptr<cluster::ClusterClient>> idle_;
  std::shared_ptr<catalog::Catalog> schemas_;
};

}  // namespace logq::service

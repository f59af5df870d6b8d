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
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "logq/catalog/catalog.hpp"
#include "logq/common/thread_pool.hpp"
#include "logq/engine/hash_index.hpp"
#include "logq/engine/plan.hpp"
#include "logq/engine/result.hpp"
#include "logq/sql/resolver.hpp"

namespace logq::engine {

struct ExecOptions {
  // Concurrent fragments; 0 means one per hardware thread.
  std::size_t parallelism = 0;
  PlanOptions plan;
};

// Single-process execution: plan, run one fragment per partition on a
// thread pool, merge. Hash indexes over cached build tables are reused
// across queries.
class LocalExecutor {
 public:
  explicit LocalExecutor(ExecOptions options = {});

  // Tables are re-fetched from the catalog by name so a table cached after
  // resolution is seen as cached. Cached mode needs every table cached
  // (kNotCached otherwise).
  QueryResult execute(const sql::ResolvedQuery& query, const catalog::Catalog& catalog,
                      StorageMode mode);

  const ExecOptions& options() const { return options_; }

 private:
  std::shared_ptr<const HashIndex> index_for(const catalog::TableRef& table,
                                             std::size_t key_ordinal, StorageMode mode,
                                             std::uint64_t& disk_rows);

  ExecOptions options_;
  ThreadPool pool_;
  std::mutex index_mu_;
  std::map<std::pair<const catalog::TableHandle*, std::size_t>,
           std::pair<catalog::TableRef, std::shared_ptr<const HashIndex>>>
      indexes_;
};

QueryResult execute_local(const sql::ResolvedQuery& query, const catalog::Catalog& catalog,
                          StorageMode mode, const ExecOptions& options = {});

}  // namespace logq::engine

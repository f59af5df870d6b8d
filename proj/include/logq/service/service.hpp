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
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "logq/common/error.hpp"
#include "logq/engine/plan.hpp"
#include "logq/service/backend.hpp"

namespace logq::service {

inline constexpr std::size_t kDefaultMaxSqlBytes = 64 * 1024;
inline constexpr std::uint64_t kDefaultRowCap = 100'000;

struct ServiceOptions {
  std::size_t max_sql_bytes = kDefaultMaxSqlBytes;
  engine::StorageMode default_mode = engine::StorageMode::kCached;
};

// "cached" or "disk" (also "diskstream"/"disk_stream"), any case.
std::optional<engine::StorageMode> parse_mode(std::string_view text);
// Applies LOGQ_MODE when set; throws Error(kBadRequest) on a bad value.
engine::StorageMode mode_from_env(engine::StorageMode fallback);

// 400 for query errors, 503 when the cluster cannot serve, 500 otherwise.
int http_status_for(ErrorCode code);

struct QueryRequest {
  std::string sql;
  std::optional<engine::StorageMode> mode;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

class QueryService {
 public:
  QueryService(std::unique_ptr<QueryBackend> backend, ServiceOptions options = {});

  // Size cap, parse and resolve run here; only valid SELECTs reach the
  // backend's execute().
  Reply handle_query(const QueryRequest& request);
  // Decodes {"sql": ..., "mode": ...} first.
  Reply handle_query_body(std::string_view body);
  Reply handle_templates() const;
  Reply handle_status();

  // Queries handed to the backend for execution.
  std::uint64_t dispatch_count() const { return dispatches_.load(); }
  QueryBackend& backend() { return *backend_; }

 private:
  std::unique_ptr<QueryBackend> backend_;
  ServiceOptions options_;
  std::atomic<std::uint64_t> dispatches_{0};
};

nlohmann::json error_body(const Error& error);

}  // namespace logq::service

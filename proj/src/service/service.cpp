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

#include "logq/service/service.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "logq/service/templates.hpp"
#include "logq/sql/parser.hpp"

namespace logq::service {

std::optional<engine::StorageMode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cached") return engine::StorageMode::kCached;
  if (lower == "disk" || lower == "diskstream" || lower == "disk_stream") {
    return engine::StorageMode::kDiskStream;
  }
  return std::nullopt;
}

engine::StorageMode mode_from_env(engine::StorageMode fallback) {
  const char* env = std::getenv("LOGQ_MODE");
  if (env == nullptr || *env == '\0') return fallback;
  auto mode = parse_mode(env);
  if (!mode) throw Error(ErrorCode::kBadRequest, "LOGQ_MODE must be cached or disk, not '" + std::string(env) + "'");
  return *mode;
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax:
    case ErrorCode::kNonQuery:
    case ErrorCode::kUnknownTable:
    case ErrorCode::kUnknownColumn:
    case ErrorCode::kAmbiguousColumn:
    case ErrorCode::kUnsupported:
    case ErrorCode::kResultTooLarge:
    case ErrorCode::kBadRequest:
      return 400;
    case ErrorCode::kNoWorkers:
    case ErrorCode::kTimeout:
    case ErrorCode::kIncomplete:
    case ErrorCode::kNotCached:
    case ErrorCode::kOutOfMemory:
      return 503;
    default:
      return 500;
  }
}

nlohmann::json error_body(const Error& error) {
  nlohmann::json err{{"code", code_name(error.code())}, {"message", error.what()}};
  err["position"] = error.position() ? nlohmann::json(*error.position()) : nlohmann::json(nullptr);
  return {{"error", err}};
}

QueryService::QueryService(std::unique_ptr<QueryBackend> backend, ServiceOptions options)
    : backend_(std::move(backend)), options_(options) {}

Reply QueryService::handle_query(const QueryRequest& request) {
  try {
    if (request.sql.size() > options_.max_sql_bytes) {
      throw Error(ErrorCode::kBadRequest, "query is " + std::to_string(request.sql.size()) +
                                              " bytes; the limit is " +
                                              std::to_string(options_.max_sql_bytes));
    }
    sql::QueryAst ast = sql::parse(request.sql);
    sql::ResolvedQuery resolved = backend_->resolve(ast);
    ++dispatches_;
    auto result = backend_->execute(request.sql, resolved, request.mode.value_or(options_.default_mode));
    return {200,
            {{"columns", result.columns},
             {"rows", result.rows},
             {"row_count", result.row_count},
             {"elapsed_ms", result.elapsed_ms},
             {"mode", result.mode}}};
  } catch (const Error& e) {
    return {http_status_for(e.code()), error_body(e)};
  } catch (const std::exception& e) {
    return {500, error_body(Error(ErrorCode::kInternal, e.what()))};
  }
}

Reply QueryService::handle_query_body(std::string_view body) {
  QueryRequest request;
  try {
    auto j = nlohmann::json::parse(body);
    if (!j.is_object() || !j.contains("sql") || !j["sql"].is_string()) {
      throw Error(ErrorCode::kBadRequest, "body must be a JSON object with a string field \"sql\"");
    }
    request.sql = j["sql"].get<std::string>();
    if (j.contains("mode") && !j["mode"].is_null()) {
      if (!j["mode"].is_string()) throw Error(ErrorCode::kBadRequest, "mode must be a string");
      request.mode = parse_mode(j["mode"].get<std::string>());
      if (!request.mode) throw Error(ErrorCode::kBadRequest, "mode must be cached or disk");
    }
  } catch (const nlohmann::json::exception& e) {
    return {400, error_body(Error(ErrorCode::kBadRequest, std::string("body is not JSON: ") + e.what()))};
  } catch (const Error& e) {
    return {400, error_body(e)};
  }
  return handle_query(request);
}

Reply QueryService::handle_templates() const { return {200, {{"templates", query_templates()}}}; }

Reply QueryService::handle_status() {
  try {
    return {200, backend_->status()};
  } catch (const Error& e) {
    // Status is informational: report an empty cluster rather than fail.
    return {200, {{"workers", 0}, {"total_cores", 0}, {"used_cores", 0}, {"tables", nlohmann::json::array()},
                  {"cached_tables", nlohmann::json::array()}, {"running_queries", 0},
                  {"error", error_body(e)["error"]}}};
  }
}

}  // namespace logq::service

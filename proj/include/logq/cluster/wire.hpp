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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "logq/catalog/catalog.hpp"
#include "logq/common/error.hpp"
#include "logq/engine/fragment.hpp"
#include "logq/engine/plan.hpp"
#include "logq/engine/result.hpp"

// Framed messages between coordinator, workers and clients. Each frame is a
// 4-byte big-endian payload length followed by a UTF-8 JSON object carrying
// "v" (protocol version), "kind" (variant name) and the variant's fields.
// Objects are emitted with sorted keys, so encoding is byte-stable.
namespace logq::cluster {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 1u << 30;

struct RangeAssignment {
  std::size_t partition_id = 0;
  catalog::ByteRange range;
  std::uint64_t row_count = 0;

  bool operator==(const RangeAssignment&) const = default;
};

// Worker -> coordinator, first message on a worker connection.
struct Register {
  std::string worker_id;
  std::string address;
  std::uint32_t cores = 1;
  bool operator==(const Register&) const = default;
};

// Positive reply to Register, AssignLoad, Broadcast, Cache and Load.
struct Ack {
  std::uint64_t seq = 0;
  std::string detail;
  bool operator==(const Ack&) const = default;
};

// Load these ranges of <data root>/source as `table`, replacing prior state.
struct AssignLoad {
  std::uint64_t seq = 0;
  std::string table;
  catalog::TableSchema schema;
  std::string source;
  std::vector<RangeAssignment> partitions;
  bool operator==(const AssignLoad&) const = default;
};

// Whole small table shipped to every worker.
struct Broadcast {
  std::uint64_t seq = 0;
  std::string table;
  catalog::TableSchema schema;
  std::string content;
  std::vector<RangeAssignment> partitions;
  bool operator==(const Broadcast&) const = default;
};

struct Cache {
  std::uint64_t seq = 0;
  std::string table;
  bool operator==(const Cache&) const = default;
};

struct Exec {
  std::uint64_t query_id = 0;
  engine::PhysicalPlan plan;
  std::vector<std::size_t> partitions;
  bool operator==(const Exec&) const = default;
};

struct Fragment {
  engine::FragmentResult result;
  bool operator==(const Fragment&) const = default;
};

// Failure tied to a query (query_id), a control request (seq), or neither.
struct Err {
  std::uint64_t query_id = 0;
  std::uint64_t seq = 0;
  ErrorCode code = ErrorCode::kInternal;
  std::string message;
  std::optional<std::size_t> partition_id;
  std::optional<std::size_t> position;
  bool operator==(const Err&) const = default;
};

struct Heartbeat {
  bool operator==(const Heartbeat&) const = default;
};

struct Shutdown {
  bool operator==(const Shutdown&) const = default;
};

// Client -> coordinator: run a query.
struct Submit {
  std::uint64_t request_id = 0;
  std::string sql;
  std::optional<engine::StorageMode> mode;
  bool operator==(const Submit&) const = default;
};

// Coordinator -> client: merged query result.
struct Result {
  std::uint64_t request_id = 0;
  engine::QueryResult result;
  bool operator==(const Result& o) const {
    return request_id == o.request_id && result.same_data(o.result) &&
           result.elapsed_ms == o.result.elapsed_ms && result.mode == o.result.mode &&
           result.rows_scanned == o.result.rows_scanned && result.disk_rows == o.result.disk_rows;
  }
};

struct StatusRequest {
  bool operator==(const StatusRequest&) const = default;
};

struct Status {
  nlohmann::json document;
  bool operator==(const Status&) const = default;
};

// Client -> coordinator: distribute <data root>/source as `table` and
// optionally cache it. A missing schema means a builtin table.
struct Load {
  std::uint64_t seq = 0;
  std::string table;
  std::string source;
  std::optional<catalog::TableSchema> schema;
  bool cache = true;
  bool operator==(const Load&) const = default;
};

using WireMessage = std::variant<Register, Ack, AssignLoad, Broadcast, Cache, Exec, Fragment, Err,
                                 Heartbeat, Shutdown, Submit, Result, StatusRequest, Status, Load>;

std::string_view kind_name(const WireMessage& message);

nlohmann::json to_json(const WireMessage& message);
WireMessage from_json(const nlohmann::json& payload);

// Payload only (the JSON text).
std::string encode_payload(const WireMessage& message);
WireMessage decode_payload(std::string_view payload);

// Length prefix + payload.
std::string encode_frame(const WireMessage& message);
// Decodes exactly one frame occupying all of `frame`.
WireMessage decode_frame(std::string_view frame);

void write_be32(std::uint32_t value, char* out);
std::uint32_t read_be32(const char* in);

// Building blocks shared with other JSON surfaces.
nlohmann::json schema_to_json(const catalog::TableSchema& schema);
catalog::TableSchema schema_from_json(const nlohmann::json& j);
nlohmann::json plan_to_json(const engine::PhysicalPlan& plan);
engine::PhysicalPlan plan_from_json(const nlohmann::json& j);
nlohmann::json result_to_json(const engine::QueryResult& result);
engine::QueryResult result_from_json(const nlohmann::json& j);

}  // namespace logq::cluster

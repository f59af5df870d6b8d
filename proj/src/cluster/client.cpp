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

#include "logq/cluster/client.hpp"

namespace logq::cluster {

ClusterClient::ClusterClient(const std::string& coordinator,
                             std::chrono::milliseconds connect_timeout)
    : conn_(connect_to(parse_host_port(coordinator), connect_timeout)) {}

WireMessage ClusterClient::round_trip(const WireMessage& request) {
  conn_->send(request);
  auto reply = conn_->receive();
  if (!reply) throw Error(ErrorCode::kIo, "coordinator closed the connection");
  if (auto* err = std::get_if<Err>(&*reply)) {
    if (err->position) throw Error(err->code, err->message, *err->position);
    throw Error(err->code, err->message);
  }
  return std::move(*reply);
}

engine::QueryResult ClusterClient::submit(std::string_view sql,
                                          std::optional<engine::StorageMode> mode) {
  std::lock_guard lock(mu_);
  const std::uint64_t id = next_id_++;
  auto reply = round_trip(Submit{id, std::string(sql), mode});
  auto* result = std::get_if<Result>(&reply);
  if (result == nullptr || result->request_id != id) {
    throw Error(ErrorCode::kProtocol, "unexpected reply to Submit");
  }
  return std::move(result->result);
}

nlohmann::json ClusterClient::status() {
  std::lock_guard lock(mu_);
  auto reply = round_trip(StatusRequest{});
  auto* status = std::get_if<Status>(&reply);
  if (status == nullptr) throw Error(ErrorCode::kProtocol, "unexpected reply to StatusRequest");
  return std::move(status->document);
}

void ClusterClient::load(const std::string& table, const std::string& source,
                         std::optional<catalog::TableSchema> schema, bool cache) {
  std::lock_guard lock(mu_);
  const std::uint64_t seq = next_id_++;
  auto reply = round_trip(Load{seq, table, source, std::move(schema), cache});
  if (!std::holds_alternative<Ack>(reply)) throw Error(ErrorCode::kProtocol, "unexpected reply to Load");
}

}  // namespace logq::cluster

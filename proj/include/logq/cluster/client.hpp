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
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "logq/cluster/net.hpp"

namespace logq::cluster {

// Blocking client for the coordinator's client-side messages. One request
// at a time per client; errors come back as the coordinator's Error.
class ClusterClient {
 public:
  explicit ClusterClient(const std::string& coordinator,
                         std::chrono::milliseconds connect_timeout = std::chrono::seconds(5));

  engine::QueryResult submit(std::string_view sql,
                             std::optional<engine::StorageMode> mode = std::nullopt);
  nlohmann::json status();
  void load(const std::string& table, const std::string& source,
            std::optional<catalog::TableSchema> schema = std::nullopt, bool cache = true);

 private:
  WireMessage round_trip(const WireMessage& request);

  std::mutex mu_;
  std::unique_ptr<Connection> conn_;
  std::uint64_t next_id_ = 1;
};

}  // namespace logq::cluster

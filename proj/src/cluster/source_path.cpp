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

#include "logq/cluster/source_path.hpp"

#include <string>

#include "logq/common/error.hpp"

namespace logq::cluster {

std::filesystem::path source_path(const std::filesystem::path& root, std::string_view source) {
  std::filesystem::path rel{std::string(source)};
  if (source.empty() || rel.is_absolute()) {
    throw Error(ErrorCode::kBadRequest, "source must be a relative path: '" + std::string(source) + "'");
  }
  for (const auto& part : rel) {
    if (part == "..") {
      throw Error(ErrorCode::kBadRequest, "source escapes the data root: '" + std::string(source) + "'");
    }
  }
  return root / rel;
}

}  // namespace logq::cluster

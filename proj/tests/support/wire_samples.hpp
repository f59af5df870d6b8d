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

#include <filesystem>
#include <string>
#include <vector>

#include "logq/cluster/wire.hpp"

namespace logq::testing {

// One fixed message per WireMessage alternative, in variant order.
std::vector<cluster::WireMessage> wire_samples();

// Where the byte-exact frames for wire_samples() are kept, one <kind>.bin each.
std::filesystem::path golden_wire_dir(const std::filesystem::path& source_dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace logq::testing

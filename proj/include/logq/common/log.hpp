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

#include <string_view>

namespace logq {

enum class LogLevel { kQuiet, kInfo, kDebug };

// Process-wide; defaults to kInfo, or LOGQ_LOG=quiet|info|debug.
void set_log_level(LogLevel level);
LogLevel log_level();

// One line to stderr, prefixed with the component name.
void log_info(std::string_view component, std::string_view message);
void log_debug(std::string_view component, std::string_view message);

}  // namespace logq

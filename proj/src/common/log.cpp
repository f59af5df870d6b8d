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

#include "logq/common/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace logq {

namespace {

LogLevel initial_level() {
  const char* env = std::getenv("LOGQ_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  std::string v(env);
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

std::atomic<LogLevel>& level_ref() {
  static std::atomic<LogLevel> level{initial_level()};
  return level;
}

void emit(std::string_view component, std::string_view message) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << "[" << component << "] " << message << '\n';
}

}  // namespace

void set_log_level(LogLevel level) { level_ref().store(level); }

LogLevel log_level() { return level_ref().load(); }

void log_info(std::string_view component, std::string_view message) {
  if (log_level() >= LogLevel::kInfo) emit(component, message);
}

void log_debug(std::string_view component, std::string_view message) {
  if (log_level() >= LogLevel::kDebug) emit(component, message);
}

}  // namespace logq

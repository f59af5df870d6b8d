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

#include "logq/common/error.hpp"

#include <array>
#include <utility>

namespace logq {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 17> kNames{{
    {ErrorCode::kSyntax, "SYNTAX"},
    {ErrorCode::kNonQuery, "NON_QUERY"},
    {ErrorCode::kUnknownTable, "UNKNOWN_TABLE"},
    {ErrorCode::kUnknownColumn, "UNKNOWN_COLUMN"},
    {ErrorCode::kAmbiguousColumn, "AMBIGUOUS_COLUMN"},
    {ErrorCode::kUnsupported, "UNSUPPORTED"},
    {ErrorCode::kIngest, "INGEST"},
    {ErrorCode::kIo, "IO"},
    {ErrorCode::kNoWorkers, "NO_WORKERS"},
    {ErrorCode::kTimeout, "TIMEOUT"},
    {ErrorCode::kProtocol, "PROTOCOL"},
    {ErrorCode::kIncomplete, "INCOMPLETE"},
    {ErrorCode::kResultTooLarge, "RESULT_TOO_LARGE"},
    {ErrorCode::kOutOfMemory, "OUT_OF_MEMORY"},
    {ErrorCode::kNotCached, "NOT_CACHED"},
    {ErrorCode::kBadRequest, "BAD_REQUEST"},
    {ErrorCode::kInternal, "INTERNAL"},
}};

}  // namespace

std::string_view code_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "INTERNAL";
}

std::optional<ErrorCode> code_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

}  // namespace logq

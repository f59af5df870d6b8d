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
#include <string>
#include <vector>

namespace logq::testing {

struct OracleStats {
  std::size_t instances = 0;
  std::size_t queries = 0;
  // One per (query, executor) pair compared against the reference.
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> failures;  // first few, for diagnostics
  double seconds = 0.0;
};

// Random instances (at most max_tmsg tMsg rows and max_tfile tFile rows),
// each queried with random grammar queries through the single-process
// engine in both storage modes and through clusters of 1, 2 and 4 workers in
// both modes; every answer must equal the reference evaluator's exactly.
OracleStats run_oracle_equivalence(std::size_t instances, std::uint64_t seed,
                                   std::size_t queries_per_instance = 5,
                                   std::size_t max_tmsg = 1000, std::size_t max_tfile = 100);

}  // namespace logq::testing

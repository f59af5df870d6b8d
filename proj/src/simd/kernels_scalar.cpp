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

#include "logq/simd/kernels.hpp"

namespace logq::simd {
namespace {

std::uint64_t count_byte_scalar(const char* data, std::size_t size, char needle) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < size; ++i) n += data[i] == needle;
  return n;
}

void index_two_bytes_scalar(const char* data, std::size_t size, char a, char b,
                            std::vector<std::uint32_t>& out) {
  for (std::size_t i = 0; i < size; ++i) {
    if (data[i] == a || data[i] == b) out.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace

namespace detail {
const Kernels kScalarKernels{Isa::kScalar, &count_byte_scalar, &index_two_bytes_scalar};
}  // namespace detail

}  // namespace logq::simd

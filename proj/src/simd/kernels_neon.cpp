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

#include <arm_neon.h>

#include "logq/simd/kernels.hpp"

namespace logq::simd {
namespace {

std::uint64_t count_byte_neon(const char* data, std::size_t size, char needle) {
  const uint8x16_t pattern = vdupq_n_u8(static_cast<std::uint8_t>(needle));
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(data);
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i + 16 <= size) {
    uint8x16_t counts = vdupq_n_u8(0);
    std::size_t blocks = 0;
    for (; blocks < 255 && i + 16 <= size; ++blocks, i += 16) {
      uint8x16_t eq = vceqq_u8(vld1q_u8(bytes + i), pattern);
      counts = vsubq_u8(counts, vreinterpretq_u8_s8(vreinterpretq_s8_u8(eq)));
    }
    total += vaddlvq_u8(counts);
  }
  for (; i < size; ++i) total += data[i] == needle;
  return total;
}

void index_two_bytes_neon(const char* data, std::size_t size, char a, char b,
                          std::vector<std::uint32_t>& out) {
  const uint8x16_t pa = vdupq_n_u8(static_cast<std::uint8_t>(a));
  const uint8x16_t pb = vdupq_n_u8(static_cast<std::uint8_t>(b));
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(data);
  std::size_t i = 0;
  for (; i + 16 <= size; i += 16) {
    uint8x16_t chunk = vld1q_u8(bytes + i);
    uint8x16_t hits = vorrq_u8(vceqq_u8(chunk, pa), vceqq_u8(chunk, pb));
    // Narrow to a 64-bit mask holding 4 bits per input byte.
    std::uint64_t mask = vget_lane_u64(
        vreinterpret_u64_u8(vshrn_n_u16(vreinterpretq_u16_u8(hits), 4)), 0);
    while (mask != 0) {
      unsigned bit = static_cast<unsigned>(__builtin_ctzll(mask));
      out.push_back(static_cast<std::uint32_t>(i + bit / 4));
      mask &= ~(0xFULL << (bit & ~3U));
    }
  }
  for (; i < size; ++i) {
    if (data[i] == a || data[i] == b) out.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace

namespace detail {
const Kernels kNeonKernels{Isa::kNeon, &count_byte_neon, &index_two_bytes_neon};
}  // namespace detail

}  // namespace logq::simd

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

#include <immintrin.h>

#include "logq/simd/kernels.hpp"

namespace logq::simd {
namespace {

inline std::uint64_t horizontal_sum_epu8(__m256i counts) {
  __m256i sums = _mm256_sad_epu8(counts, _mm256_setzero_si256());
  return static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 0)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 1)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 2)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 3));
}

std::uint64_t count_byte_avx2(const char* data, std::size_t size, char needle) {
  const __m256i pattern = _mm256_set1_epi8(needle);
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i + 32 <= size) {
    // Each lane counter is a byte, so flush at most every 255 blocks.
    __m256i counts = _mm256_setzero_si256();
    std::size_t blocks = 0;
    for (; blocks < 255 && i + 32 <= size; ++blocks, i += 32) {
      __m256i chunk = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
      counts = _mm256_sub_epi8(counts, _mm256_cmpeq_epi8(chunk, pattern));
    }
    total += horizontal_sum_epu8(counts);
  }
  for (; i < size; ++i) total += data[i] == needle;
  return total;
}

void index_two_bytes_avx2(const char* data, std::size_t size, char a, char b,
                          std::vector<std::uint32_t>& out) {
  const __m256i pa = _mm256_set1_epi8(a);
  const __m256i pb = _mm256_set1_epi8(b);
  std::size_t i = 0;
  for (; i + 32 <= size; i += 32) {
    __m256i chunk = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    __m256i hits = _mm256_or_si256(_mm256_cmpeq_epi8(chunk, pa), _mm256_cmpeq_epi8(chunk, pb));
    auto mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(hits));
    while (mask != 0) {
      out.push_back(static_cast<std::uint32_t>(i) + static_cast<std::uint32_t>(__builtin_ctz(mask)));
      mask &= mask - 1;
    }
  }
  for (; i < size; ++i) {
    if (data[i] == a || data[i] == b) out.push_back(static_cast<std::uint32_t>(i));
  }
}

}  // namespace

namespace detail {
const Kernels kAvx2Kernels{Isa::kAvx2, &count_byte_avx2, &index_two_bytes_avx2};
}  // namespace detail

}  // namespace logq::simd

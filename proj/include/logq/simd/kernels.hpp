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
#include <span>
#include <string_view>
#include <vector>

// Byte-scanning kernels behind the CSV reader. Every kernel has a portable
// scalar reference plus vector variants; the variant used at runtime is
// picked once from CPU features and can be pinned with LOGQ_SIMD
// (scalar | avx2 | neon).
namespace logq::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct Kernels {
  Isa isa;
  // Number of bytes equal to `needle`.
  std::uint64_t (*count_byte)(const char* data, std::size_t size, char needle);
  // Appends to `out` the offset of every byte equal to `a` or `b`, ascending.
  // size must be below 2^32.
  void (*index_two_bytes)(const char* data, std::size_t size, char a, char b,
                          std::vector<std::uint32_t>& out);
};

std::string_view isa_name(Isa isa);

// Kernels for a specific ISA, or nullptr when the build or the CPU lacks it.
const Kernels* kernels_for(Isa isa);

// Every ISA usable on this machine; always contains kScalar first.
std::vector<Isa> available_isas();

// The runtime-selected kernel set.
const Kernels& active();

inline std::uint64_t count_byte(std::span<const char> bytes, char needle) {
  return active().count_byte(bytes.data(), bytes.size(), needle);
}

inline void index_two_bytes(std::span<const char> bytes, char a, char b,
                            std::vector<std::uint32_t>& out) {
  active().index_two_bytes(bytes.data(), bytes.size(), a, b, out);
}

namespace detail {
extern const Kernels kScalarKernels;
#if defined(LOGQ_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif
#if defined(LOGQ_HAVE_NEON)
extern const Kernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace logq::simd

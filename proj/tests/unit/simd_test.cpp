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

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "logq/simd/kernels.hpp"

namespace logq::simd {

namespace {

// Plain loops, kept apart from the library so a broken scalar kernel is
// caught too.
std::uint64_t oracle_count(const std::string& s, char needle) {
  std::uint64_t n = 0;
  for (char c : s) n += c == needle;
  return n;
}

std::vector<std::uint32_t> oracle_index(const std::string& s, char a, char b) {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == a || s[i] == b) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::string random_buffer(std::mt19937_64& rng, std::size_t size) {
  // Dense in the bytes the kernels look for, plus high-bit bytes.
  static const char alphabet[] = {',', '\n', 'a', 'b', '\0', '\xff', '\x80', ';', ' ', '2'};
  std::string s(size, ' ');
  for (auto& c : s) c = alphabet[rng() % sizeof(alphabet)];
  return s;
}

}  // namespace

TEST(SimdKernelsTest, ScalarIsAlwaysAvailable) {
  auto isas = available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), Isa::kScalar);
  EXPECT_NE(kernels_for(Isa::kScalar), nullptr);
}

TEST(SimdKernelsTest, EveryVariantMatchesOracle) {
  std::mt19937_64 rng(7);
  for (Isa isa : available_isas()) {
    const Kernels* k = kernels_for(isa);
    ASSERT_NE(k, nullptr) << isa_name(isa);
    for (int round = 0; round < 400; ++round) {
      // Sizes straddle the 32/64-byte vector widths and their tails.
      const std::size_t size = round < 130 ? static_cast<std::size_t>(round) : rng() % 5000;
      const std::string buf = random_buffer(rng, size);
      const std::size_t skew = size ? rng() % std::min<std::size_t>(size, 31) : 0;
      const std::string_view view(buf.data() + skew, size - skew);
      const std::string sub(view);

      EXPECT_EQ(k->count_byte(view.data(), view.size(), ','), oracle_count(sub, ','))
          << isa_name(isa) << " size " << view.size();
      EXPECT_EQ(k->count_byte(view.data(), view.size(), '\xff'), oracle_count(sub, '\xff'));

      std::vector<std::uint32_t> got{99};  // appends, never clears
      k->index_two_bytes(view.data(), view.size(), ',', '\n', got);
      auto want = oracle_index(sub, ',', '\n');
      want.insert(want.begin(), 99);
      EXPECT_EQ(got, want) << isa_name(isa) << " size " << view.size();
    }
  }
}

TEST(SimdKernelsTest, VariantsAgreeOnLargeBuffer) {
  std::mt19937_64 rng(11);
  const std::string buf = random_buffer(rng, 3 << 20);
  const Kernels* scalar = kernels_for(Isa::kScalar);
  std::vector<std::uint32_t> want;
  scalar->index_two_bytes(buf.data(), buf.size(), ',', '\n', want);
  for (Isa isa : available_isas()) {
    const Kernels* k = kernels_for(isa);
    std::vector<std::uint32_t> got;
    k->index_two_bytes(buf.data(), buf.size(), ',', '\n', got);
    EXPECT_EQ(got, want) << isa_name(isa);
    EXPECT_EQ(k->count_byte(buf.data(), buf.size(), '\n'),
              scalar->count_byte(buf.data(), buf.size(), '\n'));
  }
}

TEST(SimdKernelsTest, ActiveIsOneOfAvailable) {
  const auto isas = available_isas();
  EXPECT_NE(std::find(isas.begin(), isas.end(), active().isa), isas.end());
}

}  // namespace logq::simd

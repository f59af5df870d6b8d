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

#include <cstdlib>
#include <string>

#include "logq/simd/kernels.hpp"

namespace logq::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

const Kernels* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &detail::kScalarKernels;
    case Isa::kAvx2:
#if defined(LOGQ_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &detail::kAvx2Kernels;
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(LOGQ_HAVE_NEON)
      return &detail::kNeonKernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (kernels_for(isa) != nullptr) isas.push_back(isa);
  }
  return isas;
}

namespace {

const Kernels& select() {
  if (const char* forced = std::getenv("LOGQ_SIMD")) {
    std::string want(forced);
    for (Isa isa : available_isas()) {
      if (isa_name(isa) == want) return *kernels_for(isa);
    }
  }
  // Prefer the widest available variant.
  auto isas = available_isas();
  return *kernels_for(isas.back());
}

}  // namespace

const Kernels& active() {
  static const Kernels& chosen = select();
  return chosen;
}

}  // namespace logq::simd

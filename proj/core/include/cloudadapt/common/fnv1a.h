// Copyright 2026 The CloudAdapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLOUDADAPT_COMMON_FNV1A_H_
#define CLOUDADAPT_COMMON_FNV1A_H_

#include <cstdint>
#include <span>

namespace cloudadapt {

inline constexpr uint64_t kFnv1aOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr uint64_t kFnv1aPrime = 0x100000001b3ULL;

inline uint64_t Fnv1a64(std::span<const uint8_t> bytes,
                        uint64_t hash = kFnv1aOffsetBasis) {
  for (uint8_t b : bytes) {
    hash ^= b;
    hash *= kFnv1aPrime;
  }
  return hash;
}

// FNV-1a 64 over the little-endian IEEE-754 byte stream of `values`. This is
// the base-model fingerprint carried in sparse deltas.
uint64_t FingerprintFloats(std::span<const float> values);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_COMMON_FNV1A_H_

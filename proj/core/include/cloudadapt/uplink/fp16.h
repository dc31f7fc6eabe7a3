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

// IEEE-754 binary16 conversion. Narrowing rounds to nearest, ties to even.
// Magnitudes that would round past the largest finite half (65504),
// infinities included, saturate to +/-65504 instead of becoming infinite.
// NaN stays NaN (sign and leading payload bits kept, quiet bit set).

#ifndef CLOUDADAPT_UPLINK_FP16_H_
#define CLOUDADAPT_UPLINK_FP16_H_

#include <cstdint>
#include <span>
#include <vector>

namespace cloudadapt {

inline constexpr uint16_t kHalfMaxFinite = 0x7BFF;  // 65504

uint16_t FloatToHalf(float value);
// Exact widening.
float HalfToFloat(uint16_t half);

std::vector<uint16_t> QuantizeFp16(std::span<const float> values);
std::vector<float> DequantizeFp16(std::span<const uint16_t> halves);

// Dequantize(Quantize(values)).
std::vector<float> RoundTripFp16(std::span<const float> values);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_UPLINK_FP16_H_

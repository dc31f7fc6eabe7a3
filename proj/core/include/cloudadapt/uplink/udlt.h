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

// UDLT v1: the sparse-delta uplink container. All fields little-endian.
//
//   offset  size  field
//   0       4     magic "UDLT"
//   4       1     version (1)
//   5       1     dtype (0 = FP32, 1 = FP16)
//   6       2     reserved, zero
//   8       8     u64 K, number of entries
//   16      8     u64 P, parameter count of the target model
//   24      8     u64 FNV-1a-64 of the source model's flat FP32 bytes
//   32      4K    u32 indices, strictly ascending, < P
//   32+4K   K*s   values, s = 4 (FP32) or 2 (FP16)
//
// A file is exactly 32 + 4K + sK bytes; anything shorter or longer is
// rejected before any value is returned.

#ifndef CLOUDADAPT_UPLINK_UDLT_H_
#define CLOUDADAPT_UPLINK_UDLT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/fish/delta.h"

namespace cloudadapt {

enum class DeltaDtype : uint8_t { kFp32 = 0, kFp16 = 1 };

inline constexpr uint8_t kUdltVersion = 1;
inline constexpr size_t kUdltHeaderBytes = 32;

const char* DeltaDtypeName(DeltaDtype dtype);
DeltaDtype ParseDeltaDtype(const std::string& name);  // "fp32" | "fp16"
size_t DtypeBytes(DeltaDtype dtype);

// 32 + K * 4 + K * DtypeBytes(dtype).
uint64_t DeltaPayloadBytes(uint64_t k, DeltaDtype dtype);

// FP16 encoding quantizes the values (see fp16.h). Throws FormatError if the
// delta is invalid.
Bytes EncodeDelta(const SparseDelta& delta, DeltaDtype dtype);

// Throws FormatError for bad magic, version, dtype or reserved bytes, a byte
// length that disagrees with K, non-ascending or out-of-range indices.
// FP16 values come back widened to FP32.
SparseDelta DecodeDelta(std::span<const uint8_t> bytes, DeltaDtype* dtype = nullptr);

void WriteDelta(const SparseDelta& delta, DeltaDtype dtype, const std::filesystem::path& path);
SparseDelta ReadDelta(const std::filesystem::path& path, DeltaDtype* dtype = nullptr);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_UPLINK_UDLT_H_

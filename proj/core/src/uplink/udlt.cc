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

#include "cloudadapt/uplink/udlt.h"

#include <limits>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/uplink/fp16.h"

namespace cloudadapt {
namespace {

constexpr uint8_t kMagic[4] = {'U', 'D', 'L', 'T'};

}  // namespace

const char* DeltaDtypeName(DeltaDtype dtype) {
  return dtype == DeltaDtype::kFp32 ? "fp32" : "fp16";
}

DeltaDtype ParseDeltaDtype(const std::string& name) {
  if (name == "fp32") return DeltaDtype::kFp32;
  if (name == "fp16") return DeltaDtype::kFp16;
  throw InvalidArgumentError("unknown delta dtype '" + name + "' (fp32|fp16)");
}

size_t DtypeBytes(DeltaDtype dtype) { return dtype == DeltaDtype::kFp32 ? 4 : 2; }

uint64_t DeltaPayloadBytes(uint64_t k, DeltaDtype dtype) {
  return kUdltHeaderBytes + k * 4 + k * DtypeBytes(dtype);
}

Bytes EncodeDelta(const SparseDelta& delta, DeltaDtype dtype) {
  delta.Validate();
  Bytes out(std::begin(kMagic), std::end(kMagic));
  out.reserve(DeltaPayloadBytes(delta.size(), dtype));
  out.push_back(kUdltVersion);
  out.push_back(static_cast<uint8_t>(dtype));
  out.push_back(0);
  out.push_back(0);
  AppendU64(out, delta.size());
  AppendU64(out, delta.total_params);
  AppendU64(out, delta.model_fingerprint);
  for (uint32_t i : delta.indices) AppendU32(out, i);
  if (dtype == DeltaDtype::kFp32) {
    AppendF32s(out, delta.values);
  } else {
    for (float v : delta.values) AppendU16(out, FloatToHalf(v));
  }
  return out;
}

SparseDelta DecodeDelta(std::span<const uint8_t> bytes, DeltaDtype* dtype_out) {
  if (bytes.size() < kUdltHeaderBytes) {
    throw FormatError("UDLT: truncated header (" + std::to_string(bytes.size()) + " bytes)");
  }
  ByteReader r(bytes);
  for (uint8_t m : kMagic) {
    if (r.ReadU8() != m) throw FormatError("UDLT: bad magic");
  }
  const uint8_t version = r.ReadU8();
  if (version != kUdltVersion) {
    throw FormatError("UDLT: unsupported version " + std::to_string(version));
  }
  const uint8_t dtype_byte = r.ReadU8();
  if (dtype_byte > 1) throw FormatError("UDLT: unknown dtype " + std::to_string(dtype_byte));
  const DeltaDtype dtype = static_cast<DeltaDtype>(dtype_byte);
  if (r.ReadU16() != 0) throw FormatError("UDLT: reserved bytes must be zero");

  SparseDelta d;
  const uint64_t k = r.ReadU64();
  d.total_params = r.ReadU64();
  d.model_fingerprint = r.ReadU64();
  const uint64_t per_entry = 4 + DtypeBytes(dtype);
  if (k > (std::numeric_limits<uint64_t>::max() - kUdltHeaderBytes) / per_entry ||
      DeltaPayloadBytes(k, dtype) != bytes.size()) {
    throw FormatError("UDLT: " + std::to_string(bytes.size()) + " bytes do not hold K = " +
                      std::to_string(k) + " " + DeltaDtypeName(dtype) + " entries");
  }
  d.indices.resize(k);
  for (uint64_t i = 0; i < k; ++i) d.indices[i] = r.ReadU32();
  d.values.resize(k);
  if (dtype == DeltaDtype::kFp32) {
    r.ReadF32s(d.values);
  } else {
    for (uint64_t i = 0; i < k; ++i) d.values[i] = HalfToFloat(r.ReadU16());
  }
  d.Validate();
  if (dtype_out) *dtype_out = dtype;
  return d;
}

void WriteDelta(const SparseDelta& delta, DeltaDtype dtype, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeDelta(delta, dtype));
}

SparseDelta ReadDelta(const std::filesystem::path& path, DeltaDtype* dtype) {
  return DecodeDelta(ReadFileBytes(path), dtype);
}

}  // namespace cloudadapt

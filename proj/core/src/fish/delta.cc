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

#include "cloudadapt/fish/delta.h"

#include <limits>
#include <string>

#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/common/error.h"
#include "cloudadapt/common/fnv1a.h"

namespace cloudadapt {

void SparseDelta::Validate() const {
  if (indices.size() != values.size()) {
    throw FormatError("delta has " + std::to_string(indices.size()) + " indices and " +
                      std::to_string(values.size()) + " values");
  }
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= total_params) {
      throw FormatError("delta index " + std::to_string(indices[i]) + " >= total params " +
                        std::to_string(total_params));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw FormatError("delta indices must be strictly ascending (position " +
                        std::to_string(i) + ")");
    }
  }
}

bool operator==(const SparseDelta& a, const SparseDelta& b) {
  if (a.indices != b.indices || a.model_fingerprint != b.model_fingerprint ||
      a.total_params != b.total_params || a.values.size() != b.values.size()) {
    return false;
  }
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (FloatBits(a.values[i]) != FloatBits(b.values[i])) return false;
  }
  return true;
}

SparseDelta ExtractDelta(std::span<const float> source, std::span<const float> adapted,
                         const SparseMask& mask) {
  if (source.size() != adapted.size() || mask.total_params != source.size()) {
    throw DimensionError("delta: source has " + std::to_string(source.size()) +
                         " values, adapted " + std::to_string(adapted.size()) + ", mask covers " +
                         std::to_string(mask.total_params));
  }
  if (source.size() > std::numeric_limits<uint32_t>::max()) {
    throw DimensionError("delta: more parameters than 32-bit indices can address");
  }
  mask.Validate();
  size_t m = 0;
  for (size_t k = 0; k < source.size(); ++k) {
    if (m < mask.indices.size() && mask.indices[m] == k) {
      ++m;
      continue;
    }
    if (FloatBits(source[k]) != FloatBits(adapted[k])) {
      throw MaskViolationError("delta: parameter " + std::to_string(k) +
                               " changed outside the mask");
    }
  }
  SparseDelta d;
  d.total_params = source.size();
  d.model_fingerprint = FingerprintFloats(source);
  d.indices.reserve(mask.indices.size());
  d.values.reserve(mask.indices.size());
  for (size_t k : mask.indices) {
    d.indices.push_back(static_cast<uint32_t>(k));
    d.values.push_back(adapted[k]);
  }
  return d;
}

std::vector<float> ApplyDelta(std::span<const float> source, const SparseDelta& delta) {
  if (delta.total_params != source.size()) {
    throw DimensionError("delta targets " + std::to_string(delta.total_params) +
                         " parameters, source has " + std::to_string(source.size()));
  }
  delta.Validate();
  const uint64_t fp = FingerprintFloats(source);
  if (fp != delta.model_fingerprint) {
    throw FingerprintMismatchError("delta was built against a different source model");
  }
  std::vector<float> out(source.begin(), source.end());
  for (size_t i = 0; i < delta.indices.size(); ++i) out[delta.indices[i]] = delta.values[i];
  return out;
}

}  // namespace cloudadapt

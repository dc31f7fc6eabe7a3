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

#ifndef CLOUDADAPT_FISH_DELTA_H_
#define CLOUDADAPT_FISH_DELTA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cloudadapt/fish/mask.h"

namespace cloudadapt {

// Sparse parameter update relative to a specific source model.
struct SparseDelta {
  std::vector<uint32_t> indices;  // strictly ascending, < total_params
  std::vector<float> values;      // new parameter values at `indices`
  uint64_t model_fingerprint = 0;  // FingerprintFloats(source flat vector)
  uint64_t total_params = 0;

  size_t size() const { return indices.size(); }

  // Throws FormatError on length mismatch, non-ascending or out-of-range
  // indices.
  void Validate() const;

  friend bool operator==(const SparseDelta& a, const SparseDelta& b);
};

// Carries the adapted values at the mask indices. Throws DimensionError for
// unequal lengths and MaskViolationError if source and adapted differ (in
// bits) anywhere outside the mask.
SparseDelta ExtractDelta(std::span<const float> source, std::span<const float> adapted,
                         const SparseMask& mask);

// Source with the delta's values written at its indices. Throws
// DimensionError if the lengths disagree, FingerprintMismatchError if the
// delta was built against a different source, FormatError for bad indices.
std::vector<float> ApplyDelta(std::span<const float> source, const SparseDelta& delta);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_FISH_DELTA_H_

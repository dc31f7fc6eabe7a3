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

#include "cloudadapt/detector/param_index.h"

#include <algorithm>

#include "cloudadapt/common/error.h"

namespace cloudadapt {

const char* ParamKindName(ParamKind kind) {
  switch (kind) {
    case ParamKind::kConvWeight: return "CONV_W";
    case ParamKind::kConvBias: return "CONV_B";
    case ParamKind::kBnGamma: return "BN_GAMMA";
    case ParamKind::kBnBeta: return "BN_BETA";
    case ParamKind::kFcWeight: return "FC_W";
    case ParamKind::kFcBias: return "FC_B";
  }
  return "?";
}

ParamIndexMap::ParamIndexMap(std::vector<ParamRecord> records)
    : records_(std::move(records)) {
  size_t next = 0;
  for (const ParamRecord& r : records_) {
    if (r.offset != next || r.length == 0) {
      throw InvalidArgumentError("parameter records must be contiguous and nonempty");
    }
    next += r.length;
  }
  total_ = next;
}

ParamKind ParamIndexMap::KindAt(size_t flat_index) const {
  if (flat_index >= total_) throw DimensionError("flat index out of range");
  auto it = std::upper_bound(
      records_.begin(), records_.end(), flat_index,
      [](size_t i, const ParamRecord& r) { return i < r.offset; });
  return std::prev(it)->kind;
}

namespace {

template <typename Pred>
std::vector<size_t> Collect(const std::vector<ParamRecord>& records, Pred pred) {
  std::vector<size_t> out;
  for (const ParamRecord& r : records) {
    if (!pred(r.kind)) continue;
    for (size_t i = 0; i < r.length; ++i) out.push_back(r.offset + i);
  }
  return out;
}

}  // namespace

std::vector<size_t> ParamIndexMap::ExtractorIndices() const {
  return Collect(records_, IsExtractorKind);
}

std::vector<size_t> ParamIndexMap::ClassifierIndices() const {
  return Collect(records_, [](ParamKind k) { return !IsExtractorKind(k); });
}

std::vector<size_t> ParamIndexMap::BnAffineIndices() const {
  return Collect(records_, IsBnAffineKind);
}

}  // namespace cloudadapt

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

#ifndef CLOUDADAPT_DETECTOR_PARAM_INDEX_H_
#define CLOUDADAPT_DETECTOR_PARAM_INDEX_H_

#include <cstddef>
#include <string>
#include <vector>

namespace cloudadapt {

enum class ParamKind { kConvWeight, kConvBias, kBnGamma, kBnBeta, kFcWeight, kFcBias };

const char* ParamKindName(ParamKind kind);

// Extractor parameters are everything in the convolutional stack (conv
// kernels/biases and BN affine terms); the classifier is the FC head.
inline bool IsExtractorKind(ParamKind kind) {
  return kind != ParamKind::kFcWeight && kind != ParamKind::kFcBias;
}
inline bool IsBnAffineKind(ParamKind kind) {
  return kind == ParamKind::kBnGamma || kind == ParamKind::kBnBeta;
}

struct ParamRecord {
  int layer_id = 0;  // ordinal of the owning parametric layer
  ParamKind kind = ParamKind::kConvWeight;
  size_t offset = 0;
  size_t length = 0;
};

// The canonical flat coordinate system over trainable parameters. Records are
// contiguous and cover [0, total()). BN running statistics are not trainable
// and never appear here.
class ParamIndexMap {
 public:
  ParamIndexMap() = default;
  explicit ParamIndexMap(std::vector<ParamRecord> records);

  const std::vector<ParamRecord>& records() const { return records_; }
  size_t total() const { return total_; }

  // Per-parameter kind lookup; O(log records).
  ParamKind KindAt(size_t flat_index) const;

  // Ascending flat indices of each partition.
  std::vector<size_t> ExtractorIndices() const;
  std::vector<size_t> ClassifierIndices() const;
  std::vector<size_t> BnAffineIndices() const;

 private:
  std::vector<ParamRecord> records_;
  size_t total_ = 0;
};

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DETECTOR_PARAM_INDEX_H_

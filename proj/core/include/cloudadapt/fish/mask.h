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

#ifndef CLOUDADAPT_FISH_MASK_H_
#define CLOUDADAPT_FISH_MASK_H_

#include <cstddef>
#include <vector>

#include "cloudadapt/fish/fisher.h"

namespace cloudadapt {

struct SparseMask {
  std::vector<size_t> indices;  // strictly ascending
  double sparsity = 1.0;        // fraction l of parameters kept
  size_t total_params = 0;

  // Throws MaskViolationError for non-ascending or out-of-range indices.
  void Validate() const;
};

// ceil(l * P). A product within a few ulps of an integer counts as that
// integer, so l = 0.07, P = 100 keeps 7 rather than 8 despite 0.07 not being
// representable. Throws InvalidArgumentError unless 0 < l <= 1.
size_t MaskCardinality(double l, size_t total_params);

// Indices of the MaskCardinality(l, P) largest scores; equal scores are
// ranked by lower flat index first.
SparseMask SelectMask(const FisherScores& scores, double l);

// Every index of a P-parameter model.
SparseMask FullMask(size_t total_params);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_FISH_MASK_H_

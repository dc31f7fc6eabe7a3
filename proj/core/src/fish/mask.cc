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

#include "cloudadapt/fish/mask.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt {

void SparseMask::Validate() const {
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= total_params) {
      throw MaskViolationError("mask index " + std::to_string(indices[i]) + " >= " +
                               std::to_string(total_params));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw MaskViolationError("mask indices must be strictly ascending");
    }
  }
}

size_t MaskCardinality(double l, size_t total_params) {
  if (!(l > 0.0 && l <= 1.0)) {
    throw InvalidArgumentError("sparsity must lie in (0, 1], got " + std::to_string(l));
  }
  const double x = l * static_cast<double>(total_params);
  const double nearest = std::round(x);
  double k = std::ceil(x);
  // l * P carries at most a couple of ulps of rounding error.
  if (std::fabs(x - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x)) {
    k = nearest;
  }
  return std::min(static_cast<size_t>(k), total_params);
}

SparseMask SelectMask(const FisherScores& scores, double l) {
  scores.Validate();
  const size_t p = scores.values.size();
  const size_t k = MaskCardinality(l, p);
  std::vector<size_t> order(p);
  std::iota(order.begin(), order.end(), size_t{0});
  const auto before = [&](size_t a, size_t b) {
    const double sa = scores.values[a], sb = scores.values[b];
    return sa != sb ? sa > sb : a < b;
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                   before);
  order.resize(k);
  std::sort(order.begin(), order.end());
  return SparseMask{std::move(order), l, p};
}

SparseMask FullMask(size_t total_params) {
  SparseMask m;
  m.indices.resize(total_params);
  std::iota(m.indices.begin(), m.indices.end(), size_t{0});
  m.sparsity = 1.0;
  m.total_params = total_params;
  return m;
}

}  // namespace cloudadapt

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

#ifndef CLOUDADAPT_FISH_FISHER_H_
#define CLOUDADAPT_FISH_FISHER_H_

#include <cstddef>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/model.h"

namespace cloudadapt {

// Empirical Fisher information per trainable parameter, aligned with the
// model's ParamIndexMap.
struct FisherScores {
  std::vector<double> values;
  size_t n_samples = 0;

  // Throws NumericalError unless every value is finite and >= 0.
  void Validate() const;
};

// values[k] = (1/N) sum_j (d BCE(f(x_j), y_j) / d theta_k)^2, one backward
// pass per labeled sample, summed in dataset order. The model must be in
// EVAL_STATS mode (InvalidArgumentError otherwise); BN running statistics
// are read, never written. Throws InvalidArgumentError for an empty dataset
// and NumericalError for a non-finite gradient.
FisherScores ComputeFisherScores(const DetectorModel& model, const LabeledDataset& ds);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_FISH_FISHER_H_

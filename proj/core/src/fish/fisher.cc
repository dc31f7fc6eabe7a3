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

#include "cloudadapt/fish/fisher.h"

#include <cmath>
#include <span>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/train/loss.h"

namespace cloudadapt {

void FisherScores::Validate() const {
  for (size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < 0.0) {
      throw NumericalError("Fisher score " + std::to_string(k) + " is not a finite nonnegative value");
    }
  }
}

FisherScores ComputeFisherScores(const DetectorModel& model, const LabeledDataset& ds) {
  if (model.mode() != StatsMode::kEvalStats) {
    throw InvalidArgumentError("Fisher scores require a model in EVAL_STATS mode");
  }
  if (ds.empty()) throw InvalidArgumentError("Fisher scores: empty dataset");
  ds.Validate();

  FisherScores out;
  out.values.assign(model.num_params(), 0.0);
  out.n_samples = ds.size();
  for (size_t j = 0; j < ds.size(); ++j) {
    const LabeledItem& item = ds.items[j];
    ForwardPass pass(model, std::span<const DataCube>(&item.cube, 1), StatsMode::kEvalStats);
    const Logits g = BceLogitGradient(pass.logits()[0], item.label);
    const std::vector<double> grad = pass.Backward(std::span<const Logits>(&g, 1),
                                                   ParamScope::All());
    for (size_t k = 0; k < grad.size(); ++k) {
      if (!std::isfinite(grad[k])) {
        throw NumericalError("Fisher scores: non-finite gradient at parameter " +
                             std::to_string(k) + " for sample " + std::to_string(j));
      }
      out.values[k] += grad[k] * grad[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(ds.size());
  for (double& v : out.values) v *= inv;
  return out;
}

}  // namespace cloudadapt

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

#include "cloudadapt/fish/finetune.h"

#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt {

TrainReport MaskedFinetune(DetectorModel& model, const SparseMask& mask,
                           const LabeledDataset& target_train, const TrainConfig& cfg) {
  if (mask.total_params != model.num_params()) {
    throw MaskViolationError("mask covers " + std::to_string(mask.total_params) +
                             " parameters, model has " + std::to_string(model.num_params()));
  }
  mask.Validate();
  SupervisedSpec spec;
  spec.scope = ParamScope::All();
  spec.mode = StatsMode::kEvalStats;
  spec.mask = &mask.indices;
  spec.stage = "masked_finetune";
  model.set_mode(StatsMode::kEvalStats);
  return RunSupervised(model, target_train, cfg, spec);
}

TrainReport FineTune(DetectorModel& model, const LabeledDataset& target_train,
                     const TrainConfig& cfg) {
  SupervisedSpec spec;
  spec.scope = ParamScope::All();
  spec.mode = StatsMode::kEvalStats;
  spec.stage = "finetune";
  model.set_mode(StatsMode::kEvalStats);
  return RunSupervised(model, target_train, cfg, spec);
}

}  // namespace cloudadapt

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

// Supervised fine-tuning on labeled target data. Both entry points run in
// EVAL_STATS mode (BN normalizes with the deployed running statistics, which
// stay frozen) and may update every trainable parameter kind.

#ifndef CLOUDADAPT_FISH_FINETUNE_H_
#define CLOUDADAPT_FISH_FINETUNE_H_

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/model.h"
#include "cloudadapt/fish/mask.h"
#include "cloudadapt/train/pretrain.h"

namespace cloudadapt {

// Only the mask indices are written; the complement keeps its exact bits.
// Throws MaskViolationError if the mask does not fit the model.
TrainReport MaskedFinetune(DetectorModel& model, const SparseMask& mask,
                           const LabeledDataset& target_train, const TrainConfig& cfg);

// Unrestricted fine-tuning; the same trajectory as a full mask.
TrainReport FineTune(DetectorModel& model, const LabeledDataset& target_train,
                     const TrainConfig& cfg);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_FISH_FINETUNE_H_

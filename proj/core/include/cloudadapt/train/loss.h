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

#ifndef CLOUDADAPT_TRAIN_LOSS_H_
#define CLOUDADAPT_TRAIN_LOSS_H_

#include <span>

#include "cloudadapt/detector/model.h"

namespace cloudadapt {

// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before the log,
// so the loss never exceeds -log(kProbClamp) ~= 16.12.
inline constexpr double kProbClamp = 1e-7;

// -log clamp(p_label).
double BceLoss(const ClassProbs& probs, int label);

// Batch mean of the per-item loss. Throws DimensionError on length mismatch
// or an empty batch.
double BceLoss(std::span<const ClassProbs> probs, std::span<const int> labels);

// d BceLoss / d logits for one item: p - onehot(label), or zero where the
// clamp is active (the clamped loss is flat there).
Logits BceLogitGradient(const Logits& logits, int label);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TRAIN_LOSS_H_

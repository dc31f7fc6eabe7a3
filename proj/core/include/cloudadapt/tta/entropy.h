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

#ifndef CLOUDADAPT_TTA_ENTROPY_H_
#define CLOUDADAPT_TTA_ENTROPY_H_

#include <span>

#include "cloudadapt/detector/model.h"

namespace cloudadapt {

// Shannon entropy in nats of one prediction, with p log p taken as 0 at
// p = 0.
double Entropy(const ClassProbs& probs);

// Batch sum of per-item entropies (not the mean). Throws
// InvalidArgumentError if a row's probabilities do not sum to 1 within 1e-4
// or lie outside [0, 1].
double Entropy(std::span<const ClassProbs> probs);

// d Entropy(Softmax(z)) / dz_c = -(p_c log p_c - p_c sum_k p_k log p_k).
Logits EntropyLogitGradient(const Logits& logits);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TTA_ENTROPY_H_

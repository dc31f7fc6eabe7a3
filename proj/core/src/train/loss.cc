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

#include "cloudadapt/train/loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt {
namespace {

void CheckLabel(int label) {
  if (label != 0 && label != 1) {
    throw InvalidArgumentError("label must be 0 or 1, got " + std::to_string(label));
  }
}

}  // namespace

double BceLoss(const ClassProbs& probs, int label) {
  CheckLabel(label);
  const double p = label == 1 ? probs.p1 : probs.p0;
  return -std::log(std::clamp(p, kProbClamp, 1.0 - kProbClamp));
}

double BceLoss(std::span<const ClassProbs> probs, std::span<const int> labels) {
  if (probs.size() != labels.size()) {
    throw DimensionError("loss: " + std::to_string(probs.size()) + " predictions for " +
                         std::to_string(labels.size()) + " labels");
  }
  if (probs.empty()) throw DimensionError("loss: empty batch");
  double sum = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) sum += BceLoss(probs[i], labels[i]);
  return sum / static_cast<double>(probs.size());
}

Logits BceLogitGradient(const Logits& logits, int label) {
  CheckLabel(label);
  const ClassProbs p = Softmax(logits);
  const double p_label = label == 1 ? p.p1 : p.p0;
  if (p_label < kProbClamp || p_label > 1.0 - kProbClamp) return {0.0, 0.0};
  return {p.p0 - (label == 0 ? 1.0 : 0.0), p.p1 - (label == 1 ? 1.0 : 0.0)};
}

}  // namespace cloudadapt

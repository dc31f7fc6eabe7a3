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

#include "cloudadapt/tta/tent.h"

#include <cmath>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/tta/entropy.h"

namespace cloudadapt {

void TentConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgumentError("Tent learning rate must be finite and > 0");
  }
  if (epochs < 0) throw InvalidArgumentError("Tent epochs must be >= 0");
}

TentAdapter::TentAdapter(const TentConfig& cfg) : cfg_(cfg) { cfg_.Validate(); }

EntropyGradient TentGradient(const DetectorModel& model, std::span<const DataCube> batch) {
  if (batch.empty()) throw InvalidArgumentError("Tent: empty batch");
  ForwardPass pass(model, batch, StatsMode::kTrainStats);
  EntropyGradient out;
  out.entropy = Entropy(pass.Probabilities());
  std::vector<Logits> d_logits(pass.batch_size());
  for (size_t j = 0; j < d_logits.size(); ++j) d_logits[j] = EntropyLogitGradient(pass.logits()[j]);
  out.grad = pass.Backward(d_logits, ParamScope::BnAffine());
  return out;
}

void TentAdapter::Adapt(DetectorModel& model, std::span<const DataCube> batch,
                        AdaptReport& report) {
  if (batch.empty()) throw InvalidArgumentError("Tent: empty batch");
  if (cfg_.epochs == 0) return;
  const std::vector<size_t> bn_idx = model.index_map().BnAffineIndices();
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    const EntropyGradient eg = TentGradient(model, batch);
    if (!std::isfinite(eg.entropy)) {
      throw NumericalError("Tent: non-finite entropy at epoch " + std::to_string(epoch));
    }
    if (epoch == 0) report.entropy_trace.push_back(eg.entropy / static_cast<double>(batch.size()));
    std::span<float> params = model.mutable_params();
    for (size_t k : bn_idx) {
      if (!std::isfinite(eg.grad[k])) {
        throw NumericalError("Tent: non-finite gradient at parameter " + std::to_string(k));
      }
    }
    for (size_t k : bn_idx) {
      params[k] = static_cast<float>(params[k] - cfg_.learning_rate * eg.grad[k]);
    }
  }
  model.set_mode(StatsMode::kTrainStats);
}

}  // namespace cloudadapt

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

// Entropy minimization over BN affine parameters. Each epoch runs one
// TRAIN_STATS forward pass over the batch (BN normalizes with the batch's
// own statistics), differentiates the batch-summed prediction entropy and
// takes one gradient-descent step on every BN gamma and beta. Running
// statistics and all other parameters keep their exact bits.

#ifndef CLOUDADAPT_TTA_TENT_H_
#define CLOUDADAPT_TTA_TENT_H_

#include <span>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/tta/driver.h"

namespace cloudadapt {

struct TentConfig {
  double learning_rate = 1e-3;
  // Gradient steps per batch. Zero turns the adapter into a no-op.
  int epochs = 1;

  void Validate() const;
};

class TentAdapter : public TtaAdapter {
 public:
  explicit TentAdapter(const TentConfig& cfg);

  const char* name() const override { return "tent"; }

  // Appends the batch's mean entropy before the first step to the report.
  // Leaves the model in TRAIN_STATS mode. Throws NumericalError if the
  // entropy or its gradient is not finite.
  void Adapt(DetectorModel& model, std::span<const DataCube> batch,
             AdaptReport& report) override;

 private:
  TentConfig cfg_;
};

// Batch-summed entropy of the model's TRAIN_STATS predictions on `batch`
// and its gradient with respect to the flat parameter vector (zero outside
// the BN affine entries).
struct EntropyGradient {
  double entropy = 0.0;
  std::vector<double> grad;
};
EntropyGradient TentGradient(const DetectorModel& model, std::span<const DataCube> batch);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TTA_TENT_H_

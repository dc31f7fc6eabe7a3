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

// Running-statistics adaptation with decaying momentum. Each call first
// decays the shared momentum, m <- m * omega + delta, then blends every BN
// layer's running statistics toward the batch statistics:
//
//   mean <- (1 - m) * mean + m * batch_mean
//   var  <- (1 - m) * var  + m * batch_var   (biased batch variance)
//
// Batch statistics come from a TRAIN_STATS forward pass, so each layer sees
// inputs normalized by the batch itself. No gradients are taken and the
// trainable parameters are never written.

#ifndef CLOUDADAPT_TTA_DUA_H_
#define CLOUDADAPT_TTA_DUA_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/tta/driver.h"

namespace cloudadapt {

struct DUAConfig {
  double omega = 0.94;
  double delta_floor = 0.005;
  double m0 = 0.1;
  // Each batch item is joined by augment_factor - 1 seeded flips/rotations.
  int augment_factor = 1;
  uint64_t seed = 0;

  // Throws InvalidArgumentError unless omega in (0, 1), delta_floor > 0,
  // m0 in (0, 1], delta_floor / (1 - omega) < 1 and augment_factor >= 1.
  void Validate() const;
};

// Horizontal flip (mirror columns) followed by `quarter_turns` counter-
// clockwise rotations. Odd turn counts need a square cube.
DataCube AugmentCube(const DataCube& cube, bool flip, int quarter_turns);

// Batch expanded per DUAConfig::augment_factor; stream `call` selects the
// random draws.
std::vector<DataCube> AugmentBatch(std::span<const DataCube> batch, int augment_factor,
                                   uint64_t seed, uint64_t call);

class DuaAdapter : public TtaAdapter {
 public:
  explicit DuaAdapter(const DUAConfig& cfg);

  const char* name() const override { return "dua"; }
  double momentum() const { return m_; }
  size_t calls() const { return calls_; }

  // Leaves the model in EVAL_STATS mode.
  void Adapt(DetectorModel& model, std::span<const DataCube> batch,
             AdaptReport& report) override;

 private:
  DUAConfig cfg_;
  double m_;
  size_t calls_ = 0;
};

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TTA_DUA_H_

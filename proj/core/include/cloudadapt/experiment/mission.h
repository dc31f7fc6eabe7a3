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

// The desk-scale mission loop: synthesize a source/target pair, pretrain the
// source detector in two stages, measure the domain gap, then adapt on the
// target domain with sparse supervised fine-tuning, DUA or Tent. Also hosts
// the ablation sweeps.
//
// Target adaptation data is the target TRAIN split (labels used only by the
// supervised path); all scores are on the target TEST split at the 70%
// threshold, the labeling the deployed classifier is trained for.

#ifndef CLOUDADAPT_EXPERIMENT_MISSION_H_
#define CLOUDADAPT_EXPERIMENT_MISSION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloudadapt/data/synthetic.h"
#include "cloudadapt/detector/model.h"
#include "cloudadapt/eval/metrics.h"
#include "cloudadapt/fish/delta.h"
#include "cloudadapt/fish/mask.h"
#include "cloudadapt/train/pretrain.h"
#include "cloudadapt/tta/driver.h"
#include "cloudadapt/tta/dua.h"
#include "cloudadapt/tta/tent.h"

namespace cloudadapt {

struct MissionConfig {
  uint64_t seed = 7;
  std::string arch_preset = "cloudscout-mini";
  SceneGeometry geometry;
  int n_per_split = 320;
  std::string shift_preset = "strong";

  TrainConfig stage1;
  TrainConfig stage2;
  TrainConfig finetune;
  double sparsity = 0.25;

  DUAConfig dua;
  size_t dua_batch = 1;
  size_t dua_samples = 64;  // stream prefix handed to the DUA driver

  TentConfig tent;
  size_t tent_batch = 8;
  int tent_extra_epochs = 3;  // comparison run with more steps per batch

  MissionConfig();
  void Validate() const;
  std::string ToJson() const;
};

// Source model after both stages, left in EVAL_STATS mode.
struct PretrainOutcome {
  DetectorModel model;
  TrainReport stage1;
  TrainReport stage2;
};
PretrainOutcome PretrainSource(const DomainPair& pair, const MissionConfig& cfg);

struct FishOutcome {
  DetectorModel model;
  SparseMask mask;
  SparseDelta delta;
  TrainReport report;
};
// Fisher scores on target_train, mask at `sparsity`, masked fine-tune, delta
// against the source flat vector.
FishOutcome RunFish(const DetectorModel& source, const LabeledDataset& target_train,
                    const TrainConfig& cfg, double sparsity);

struct TtaOutcome {
  DetectorModel model;
  AdaptReport report;
};
TtaOutcome RunDua(const DetectorModel& source, std::span<const DataCube> stream, size_t n_batch,
                  const DUAConfig& cfg);
TtaOutcome RunTent(const DetectorModel& source, std::span<const DataCube> stream,
                   size_t n_batch, const TentConfig& cfg);

// Evaluation protocol after each adaptation route: EVAL_STATS for source,
// supervised and DUA models; TRAIN_STATS with batches of the adaptation
// batch size for Tent, whose BN layers normalize with the incoming batch.
EvalOptions TentEvalOptions(size_t n_batch);

struct MissionResult {
  MissionConfig config;
  MetricsReport source_test;
  GapReport gap;
  MetricsReport fish;       // masked fine-tune at cfg.sparsity
  MetricsReport fish_full;  // sparsity 1
  MetricsReport dua;
  MetricsReport tent;
  MetricsReport tent_extra;  // cfg.tent_extra_epochs

  // Artifacts for determinism checks.
  DetectorModel source_model;
  DetectorModel fish_model;
  DetectorModel dua_model;
  DetectorModel tent_model;
  SparseDelta fish_delta;
  AdaptReport dua_report;
  AdaptReport tent_report;

  std::string ToJson() const;
};

MissionResult RunMission(const MissionConfig& cfg);

struct SweepPoint {
  double x = 0.0;
  MetricsReport metrics;
};

struct Sweep {
  std::string name;
  std::string x_label;
  std::vector<SweepPoint> points;

  std::string ToJson() const;
};

Sweep SparsitySweep(const DetectorModel& source, const LabeledDataset& target_train,
                    const LabeledDataset& target_test, const TrainConfig& cfg,
                    const std::vector<double>& sparsities);
// DUA on the first n cubes of `stream` for each n in `counts`.
Sweep DuaSampleSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, size_t n_batch, const DUAConfig& cfg,
                     const std::vector<size_t>& counts);
// DUA with each augmentation factor.
Sweep DuaAugmentSweep(const DetectorModel& source, std::span<const DataCube> stream,
                      const LabeledDataset& target_test, size_t n_batch, const DUAConfig& cfg,
                      const std::vector<int>& factors);
Sweep TentBatchSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, const TentConfig& cfg,
                     const std::vector<size_t>& batch_sizes);
Sweep TentEpochSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, size_t n_batch, const TentConfig& cfg,
                     const std::vector<int>& epochs);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_EXPERIMENT_MISSION_H_

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

// Two-stage supervised training of the source detector, plus the mini-batch
// gradient-descent loop it shares with supervised fine-tuning.
//
// Stage 1 (TrainExtractor) fits the extractor on the low-threshold labels
// with the classifier held at its initial values; BN normalizes with batch
// statistics and the running statistics are updated. Stage 2
// (TrainClassifier) fits the classifier on the high-threshold labels with
// the whole extractor, BN running statistics included, frozen.

#ifndef CLOUDADAPT_TRAIN_PRETRAIN_H_
#define CLOUDADAPT_TRAIN_PRETRAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/model.h"

namespace cloudadapt {

enum class LrScheduleKind { kConstant, kStepDecay };

const char* LrScheduleName(LrScheduleKind kind);
LrScheduleKind ParseLrSchedule(const std::string& name);

struct TrainConfig {
  double learning_rate = 1e-2;
  int epochs = 20;
  int batch_size = 16;
  uint64_t seed = 0;
  LrScheduleKind schedule = LrScheduleKind::kConstant;
  // Step decay: lr * decay_factor^floor(epoch / decay_period).
  double decay_factor = 0.5;
  int decay_period = 10;

  // Throws InvalidArgumentError. A zero learning rate is allowed.
  void Validate() const;
  double LearningRateAt(int epoch) const;
};

struct TrainReport {
  // Mean per-sample loss over each epoch, measured before each step.
  std::vector<double> epoch_losses;
  size_t steps = 0;
};

// One supervised descent run. Parameters outside `scope`, and outside `mask`
// when it is given, are never written.
struct SupervisedSpec {
  ParamScope scope = ParamScope::All();
  StatsMode mode = StatsMode::kTrainStats;
  bool update_running_stats = false;
  // Ascending flat indices; null means every index in `scope`.
  const std::vector<size_t>* mask = nullptr;
  std::string stage = "train";  // for diagnostics
};

// Epoch e visits the items in a permutation drawn from (cfg.seed, e); the
// last batch of an epoch may be short. Each step takes the batch-mean BCE
// gradient. Throws InvalidArgumentError for an empty dataset and
// NumericalError when the loss or gradient stops being finite.
TrainReport RunSupervised(DetectorModel& model, const LabeledDataset& ds, const TrainConfig& cfg,
                          const SupervisedSpec& spec);

TrainReport TrainExtractor(DetectorModel& model, const LabeledDataset& th30_train,
                           const TrainConfig& cfg);

// Leaves the model in EVAL_STATS mode.
TrainReport TrainClassifier(DetectorModel& model, const LabeledDataset& th70_train,
                            const TrainConfig& cfg);

// Mean BCE over `ds` in the given mode, evaluated in consecutive batches.
double MeanLoss(const DetectorModel& model, const LabeledDataset& ds, StatsMode mode,
                size_t batch_size = 64);

// Copies the cubes of `ds` at the positions in `order`.
std::vector<DataCube> GatherCubes(const LabeledDataset& ds, std::span<const size_t> order);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TRAIN_PRETRAIN_H_

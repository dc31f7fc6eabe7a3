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

#include "cloudadapt/train/pretrain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/random.h"
#include "cloudadapt/train/loss.h"

namespace cloudadapt {

const char* LrScheduleName(LrScheduleKind kind) {
  return kind == LrScheduleKind::kConstant ? "constant" : "step";
}

LrScheduleKind ParseLrSchedule(const std::string& name) {
  if (name == "constant") return LrScheduleKind::kConstant;
  if (name == "step") return LrScheduleKind::kStepDecay;
  throw InvalidArgumentError("unknown lr schedule '" + name + "' (constant|step)");
}

void TrainConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgumentError("learning rate must be finite and >= 0");
  }
  if (epochs < 1) throw InvalidArgumentError("epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgumentError("batch size must be >= 1");
  if (schedule == LrScheduleKind::kStepDecay) {
    if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
      throw InvalidArgumentError("decay factor must be in (0, 1]");
    }
    if (decay_period < 1) throw InvalidArgumentError("decay period must be >= 1");
  }
}

double TrainConfig::LearningRateAt(int epoch) const {
  if (schedule == LrScheduleKind::kConstant) return learning_rate;
  return learning_rate * std::pow(decay_factor, epoch / decay_period);
}

std::vector<DataCube> GatherCubes(const LabeledDataset& ds, std::span<const size_t> order) {
  std::vector<DataCube> out;
  out.reserve(order.size());
  for (size_t i : order) out.push_back(ds.items.at(i).cube);
  return out;
}

namespace {

std::vector<size_t> ScopeIndices(const ParamIndexMap& index, const ParamScope& scope) {
  std::vector<size_t> out;
  for (const ParamRecord& r : index.records()) {
    if (!scope.Includes(r.kind)) continue;
    for (size_t i = 0; i < r.length; ++i) out.push_back(r.offset + i);
  }
  return out;
}

}  // namespace

TrainReport RunSupervised(DetectorModel& model, const LabeledDataset& ds, const TrainConfig& cfg,
                          const SupervisedSpec& spec) {
  cfg.Validate();
  if (ds.empty()) throw InvalidArgumentError(spec.stage + ": empty training set");
  ds.Validate();
  if (spec.mask) {
    for (size_t k : *spec.mask) {
      if (k >= model.num_params()) {
        throw MaskViolationError(spec.stage + ": mask index " + std::to_string(k) +
                                 " outside the model's " +
                                 std::to_string(model.num_params()) + " parameters");
      }
    }
  }
  const std::vector<size_t> owned =
      spec.mask ? std::vector<size_t>{} : ScopeIndices(model.index_map(), spec.scope);
  const std::vector<size_t>& active = spec.mask ? *spec.mask : owned;

  TrainReport report;
  const size_t n = ds.size();
  const size_t bs = static_cast<size_t>(cfg.batch_size);
  std::vector<size_t> order(n);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(MixSeed(cfg.seed, static_cast<uint64_t>(epoch)));
    rng.Shuffle(order);
    const double lr = cfg.LearningRateAt(epoch);
    double loss_sum = 0.0;
    for (size_t start = 0; start < n; start += bs) {
      const size_t count = std::min(bs, n - start);
      const std::span<const size_t> idx(order.data() + start, count);
      const std::vector<DataCube> cubes = GatherCubes(ds, idx);
      ForwardPass pass(model, cubes, spec.mode);

      std::vector<Logits> d_logits(count);
      double batch_loss = 0.0;
      for (size_t j = 0; j < count; ++j) {
        const int label = ds.items[idx[j]].label;
        batch_loss += BceLoss(Softmax(pass.logits()[j]), label);
        const Logits g = BceLogitGradient(pass.logits()[j], label);
        d_logits[j] = {g[0] / static_cast<double>(count), g[1] / static_cast<double>(count)};
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericalError(spec.stage + ": non-finite loss at epoch " + std::to_string(epoch) +
                             ", batch starting " + std::to_string(start));
      }
      loss_sum += batch_loss;

      const std::vector<double> grad = pass.Backward(d_logits, spec.scope);
      std::span<float> params = model.mutable_params();
      for (size_t k : active) {
        if (!std::isfinite(grad[k])) {
          throw NumericalError(spec.stage + ": non-finite gradient at parameter " +
                               std::to_string(k) + ", epoch " + std::to_string(epoch));
        }
      }
      for (size_t k : active) {
        params[k] = static_cast<float>(params[k] - lr * grad[k]);
      }
      if (spec.update_running_stats && spec.mode == StatsMode::kTrainStats) {
        UpdateRunningStats(model, pass.batch_moments());
      }
      ++report.steps;
    }
    report.epoch_losses.push_back(loss_sum / static_cast<double>(n));
  }
  return report;
}

TrainReport TrainExtractor(DetectorModel& model, const LabeledDataset& th30_train,
                           const TrainConfig& cfg) {
  SupervisedSpec spec;
  spec.scope = ParamScope::Extractor();
  spec.mode = StatsMode::kTrainStats;
  spec.update_running_stats = true;
  spec.stage = "train_extractor";
  model.set_mode(StatsMode::kTrainStats);
  return RunSupervised(model, th30_train, cfg, spec);
}

TrainReport TrainClassifier(DetectorModel& model, const LabeledDataset& th70_train,
                            const TrainConfig& cfg) {
  SupervisedSpec spec;
  spec.scope = ParamScope::Classifier();
  spec.mode = StatsMode::kEvalStats;
  spec.update_running_stats = false;
  spec.stage = "train_classifier";
  TrainReport report = RunSupervised(model, th70_train, cfg, spec);
  model.set_mode(StatsMode::kEvalStats);
  return report;
}

double MeanLoss(const DetectorModel& model, const LabeledDataset& ds, StatsMode mode,
                size_t batch_size) {
  if (ds.empty()) throw InvalidArgumentError("mean loss: empty dataset");
  if (batch_size == 0) throw InvalidArgumentError("mean loss: batch size must be >= 1");
  double sum = 0.0;
  std::vector<size_t> idx;
  for (size_t start = 0; start < ds.size(); start += batch_size) {
    const size_t count = std::min(batch_size, ds.size() - start);
    idx.resize(count);
    std::iota(idx.begin(), idx.end(), start);
    const std::vector<DataCube> cubes = GatherCubes(ds, idx);
    const std::vector<ClassProbs> probs = Forward(model, cubes, mode);
    for (size_t j = 0; j < count; ++j) sum += BceLoss(probs[j], ds.items[start + j].label);
  }
  return sum / static_cast<double>(ds.size());
}

}  // namespace cloudadapt

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

// BN-equipped CNN cloud detector.
//
// Trainable parameters live in one flat float32 buffer laid out by the
// model's ParamIndexMap; every other module (training masks, Fisher scores,
// sparse deltas) addresses parameters through that flat index. Activations
// and gradients are computed in double precision.
//
// A DetectorModel is single-writer. Concurrent read-only inference is safe
// once no thread mutates the model.

#ifndef CLOUDADAPT_DETECTOR_MODEL_H_
#define CLOUDADAPT_DETECTOR_MODEL_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/arch.h"
#include "cloudadapt/detector/param_index.h"

namespace cloudadapt {

namespace internal {
struct Network;
struct ForwardTape;
}  // namespace internal

// TRAIN_STATS: BN normalizes with statistics of the current batch.
// EVAL_STATS:  BN normalizes with the running statistics.
enum class StatsMode { kTrainStats, kEvalStats };

const char* StatsModeName(StatsMode mode);
StatsMode ParseStatsMode(const std::string& name);

// Non-trainable BN state.
struct BnState {
  int channels = 0;
  double epsilon = 1e-5;
  double momentum = 0.1;
  std::vector<float> running_mean;
  std::vector<float> running_var;
  size_t gamma_offset = 0;  // into the flat parameter buffer
  size_t beta_offset = 0;

  friend bool operator==(const BnState&, const BnState&) = default;
};

struct ClassProbs {
  double p0 = 0.5;  // not cloudy
  double p1 = 0.5;  // cloudy
};

using Logits = std::array<double, 2>;

// Argmax with ties going to class 0 (not cloudy).
inline int ArgmaxClass(const ClassProbs& p) { return p.p1 > p.p0 ? 1 : 0; }
inline int ArgmaxClass(const Logits& z) { return z[1] > z[0] ? 1 : 0; }

ClassProbs Softmax(const Logits& logits);

class DetectorModel {
 public:
  DetectorModel();
  ~DetectorModel();
  DetectorModel(const DetectorModel&);
  DetectorModel& operator=(const DetectorModel&);
  DetectorModel(DetectorModel&&) noexcept;
  DetectorModel& operator=(DetectorModel&&) noexcept;

  const ArchConfig& arch() const { return arch_; }
  uint64_t seed() const { return seed_; }
  const ParamIndexMap& index_map() const { return index_; }
  size_t num_params() const { return params_.size(); }

  std::span<const float> params() const { return params_; }
  std::span<float> mutable_params() { return params_; }

  const std::vector<BnState>& bn_states() const { return bn_; }
  std::vector<BnState>& mutable_bn_states() { return bn_; }

  StatsMode mode() const { return mode_; }
  void set_mode(StatsMode mode) { mode_ = mode; }

  const internal::Network& network() const { return *network_; }

  // Parameters, BN state and mode compared bitwise; arch by value.
  friend bool operator==(const DetectorModel& a, const DetectorModel& b);

 private:
  friend DetectorModel BuildModel(const ArchConfig& arch, uint64_t seed);

  ArchConfig arch_;
  uint64_t seed_ = 0;
  ParamIndexMap index_;
  std::vector<float> params_;
  std::vector<BnState> bn_;
  StatsMode mode_ = StatsMode::kTrainStats;
  std::shared_ptr<const internal::Network> network_;
};

// Weights are drawn uniform on +/- sqrt(6 / fan_in) from a seeded stream;
// biases and BN beta start at 0, BN gamma at 1; running statistics (0, 1),
// momentum arch.bn_momentum, mode TRAIN_STATS.
DetectorModel BuildModel(const ArchConfig& arch, uint64_t seed);

// Softmax class probabilities in the model's current mode, or `mode`.
// Throws DimensionError if a cube does not match the input geometry.
std::vector<ClassProbs> Forward(const DetectorModel& model,
                                std::span<const DataCube> batch);
std::vector<ClassProbs> Forward(const DetectorModel& model,
                                std::span<const DataCube> batch, StatsMode mode);

// Single-cube argmax under the model's current mode.
int Predict(const DetectorModel& model, const DataCube& cube);

std::vector<float> FlattenParams(const DetectorModel& model);
// Throws DimensionError unless values.size() == model.num_params().
void UnflattenParams(DetectorModel& model, std::span<const float> values);

// Read/write view of one BN layer. Handles alias the model: writes are seen
// by later forward passes. A handle is invalidated when its model is
// destroyed or reassigned.
class BnHandle {
 public:
  BnHandle(BnState* state, float* params) : state_(state), params_(params) {}

  int channels() const { return state_->channels; }
  double epsilon() const { return state_->epsilon; }
  double momentum() const { return state_->momentum; }
  void set_momentum(double m) { state_->momentum = m; }

  std::span<float> running_mean() { return state_->running_mean; }
  std::span<float> running_var() { return state_->running_var; }
  std::span<float> gamma() {
    return {params_ + state_->gamma_offset, static_cast<size_t>(state_->channels)};
  }
  std::span<float> beta() {
    return {params_ + state_->beta_offset, static_cast<size_t>(state_->channels)};
  }

 private:
  BnState* state_;
  float* params_;
};

// One handle per BN layer, in network order.
std::vector<BnHandle> BnLayers(DetectorModel& model);

// Which trainable groups a backward pass must produce gradients for.
// Backpropagation stops at the earliest layer holding an in-scope group.
struct ParamScope {
  bool conv = true;
  bool bn_affine = true;
  bool fc = true;

  static ParamScope All() { return {true, true, true}; }
  static ParamScope Extractor() { return {true, true, false}; }
  static ParamScope Classifier() { return {false, false, true}; }
  static ParamScope BnAffine() { return {false, true, false}; }

  bool Includes(ParamKind kind) const;
};

// Per-channel statistics of the activations entering a BN layer, taken over
// batch and spatial positions (variance biased, divide by n).
struct BatchMoments {
  std::vector<double> mean;
  std::vector<double> var;
};

// A recorded forward pass that can be differentiated. The model must outlive
// the pass and must not be mutated while the pass is in use.
class ForwardPass {
 public:
  ForwardPass(const DetectorModel& model, std::span<const DataCube> batch,
              StatsMode mode);
  ~ForwardPass();
  ForwardPass(ForwardPass&&) noexcept;
  ForwardPass& operator=(ForwardPass&&) noexcept;

  size_t batch_size() const { return logits_.size(); }
  StatsMode mode() const { return mode_; }
  const std::vector<Logits>& logits() const { return logits_; }
  std::vector<ClassProbs> Probabilities() const;

  // One entry per BN layer in TRAIN_STATS mode, empty in EVAL_STATS mode.
  const std::vector<BatchMoments>& batch_moments() const { return moments_; }

  // Gradient of sum_n <d_logits[n], logits[n]> with respect to the flat
  // parameter vector. Entries outside `scope` are left at zero.
  std::vector<double> Backward(std::span<const Logits> d_logits,
                               const ParamScope& scope) const;

 private:
  const DetectorModel* model_;
  StatsMode mode_;
  std::vector<Logits> logits_;
  std::vector<BatchMoments> moments_;
  std::unique_ptr<internal::ForwardTape> tape_;
};

// running <- (1 - m) * running + m * batch for every BN layer, where m is
// each layer's own momentum. `moments` must come from a TRAIN_STATS pass of
// this model.
void UpdateRunningStats(DetectorModel& model,
                        const std::vector<BatchMoments>& moments);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DETECTOR_MODEL_H_

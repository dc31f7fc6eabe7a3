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

#include "cloudadapt/detector/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/random.h"
#include "network.h"

namespace cloudadapt {

const char* StatsModeName(StatsMode mode) {
  return mode == StatsMode::kTrainStats ? "TRAIN_STATS" : "EVAL_STATS";
}

StatsMode ParseStatsMode(const std::string& name) {
  if (name == "TRAIN_STATS") return StatsMode::kTrainStats;
  if (name == "EVAL_STATS") return StatsMode::kEvalStats;
  throw InvalidArgumentError("unknown stats mode '" + name + "'");
}

ClassProbs Softmax(const Logits& z) {
  const double hi = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - hi);
  const double e1 = std::exp(z[1] - hi);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

DetectorModel::DetectorModel() = default;
DetectorModel::~DetectorModel() = default;
DetectorModel::DetectorModel(const DetectorModel&) = default;
DetectorModel& DetectorModel::operator=(const DetectorModel&) = default;
DetectorModel::DetectorModel(DetectorModel&&) noexcept = default;
DetectorModel& DetectorModel::operator=(DetectorModel&&) noexcept = default;

namespace {

bool SameBits(std::span<const float> a, std::span<const float> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0);
}

}  // namespace

bool operator==(const DetectorModel& a, const DetectorModel& b) {
  if (!(a.arch_ == b.arch_) || a.seed_ != b.seed_ || a.mode_ != b.mode_) return false;
  if (!SameBits(a.params_, b.params_) || a.bn_.size() != b.bn_.size()) return false;
  for (size_t i = 0; i < a.bn_.size(); ++i) {
    const BnState& x = a.bn_[i];
    const BnState& y = b.bn_[i];
    if (x.channels != y.channels || x.gamma_offset != y.gamma_offset ||
        x.beta_offset != y.beta_offset ||
        std::memcmp(&x.epsilon, &y.epsilon, sizeof(double)) != 0 ||
        std::memcmp(&x.momentum, &y.momentum, sizeof(double)) != 0 ||
        !SameBits(x.running_mean, y.running_mean) || !SameBits(x.running_var, y.running_var)) {
      return false;
    }
  }
  return true;
}

DetectorModel BuildModel(const ArchConfig& arch, uint64_t seed) {
  auto net = std::make_shared<internal::Network>(internal::BuildNetwork(arch));
  DetectorModel m;
  m.arch_ = arch;
  m.seed_ = seed;
  m.index_ = ParamIndexMap(net->records);
  m.params_.assign(net->num_params, 0.0f);

  Rng rng(seed);
  for (size_t r = 0; r < net->records.size(); ++r) {
    const ParamRecord& rec = net->records[r];
    float* out = m.params_.data() + rec.offset;
    switch (rec.kind) {
      case ParamKind::kConvWeight:
      case ParamKind::kFcWeight: {
        const double bound = std::sqrt(6.0 / static_cast<double>(net->fan_in[r]));
        for (size_t i = 0; i < rec.length; ++i) {
          out[i] = static_cast<float>(rng.Uniform(-bound, bound));
        }
        break;
      }
      case ParamKind::kBnGamma:
        std::fill(out, out + rec.length, 1.0f);
        break;
      default:
        break;
    }
  }

  m.bn_.resize(net->bn_channels.size());
  for (size_t i = 0; i < m.bn_.size(); ++i) {
    BnState& st = m.bn_[i];
    st.channels = net->bn_channels[i];
    st.epsilon = arch.bn_epsilon;
    st.momentum = arch.bn_momentum;
    st.running_mean.assign(st.channels, 0.0f);
    st.running_var.assign(st.channels, 1.0f);
    st.gamma_offset = net->bn_gamma_offsets[i];
    st.beta_offset = net->bn_beta_offsets[i];
  }
  m.mode_ = StatsMode::kTrainStats;
  m.network_ = std::move(net);
  return m;
}

std::vector<ClassProbs> Forward(const DetectorModel& model, std::span<const DataCube> batch) {
  return Forward(model, batch, model.mode());
}

std::vector<ClassProbs> Forward(const DetectorModel& model, std::span<const DataCube> batch,
                                StatsMode mode) {
  internal::Tensor x = internal::CubesToTensor(batch, model.arch());
  internal::ForwardContext ctx{model.params(), model.bn_states(), mode, nullptr};
  internal::Tensor z = internal::RunLayers(model.network().layers, std::move(x), ctx, nullptr);
  std::vector<ClassProbs> out(batch.size());
  for (size_t n = 0; n < batch.size(); ++n) out[n] = Softmax({z.v[2 * n], z.v[2 * n + 1]});
  return out;
}

int Predict(const DetectorModel& model, const DataCube& cube) {
  return ArgmaxClass(Forward(model, std::span<const DataCube>(&cube, 1)).front());
}

std::vector<float> FlattenParams(const DetectorModel& model) {
  return {model.params().begin(), model.params().end()};
}

void UnflattenParams(DetectorModel& model, std::span<const float> values) {
  if (values.size() != model.num_params()) {
    throw DimensionError("flat vector has " + std::to_string(values.size()) +
                         " entries, model has " + std::to_string(model.num_params()));
  }
  std::copy(values.begin(), values.end(), model.mutable_params().begin());
}

std::vector<BnHandle> BnLayers(DetectorModel& model) {
  std::vector<BnHandle> out;
  float* params = model.mutable_params().data();
  for (BnState& st : model.mutable_bn_states()) out.emplace_back(&st, params);
  return out;
}

bool ParamScope::Includes(ParamKind kind) const {
  switch (kind) {
    case ParamKind::kConvWeight:
    case ParamKind::kConvBias:
      return conv;
    case ParamKind::kBnGamma:
    case ParamKind::kBnBeta:
      return bn_affine;
    case ParamKind::kFcWeight:
    case ParamKind::kFcBias:
      return fc;
  }
  return false;
}

ForwardPass::ForwardPass(const DetectorModel& model, std::span<const DataCube> batch,
                         StatsMode mode)
    : model_(&model), mode_(mode), tape_(std::make_unique<internal::ForwardTape>()) {
  internal::Tensor x = internal::CubesToTensor(batch, model.arch());
  if (mode == StatsMode::kTrainStats) moments_.resize(model.bn_states().size());
  internal::ForwardContext ctx{model.params(), model.bn_states(), mode,
                               mode == StatsMode::kTrainStats ? &moments_ : nullptr};
  internal::Tensor z =
      internal::RunLayers(model.network().layers, std::move(x), ctx, &tape_->layers);
  logits_.resize(batch.size());
  for (size_t n = 0; n < batch.size(); ++n) logits_[n] = {z.v[2 * n], z.v[2 * n + 1]};
}

ForwardPass::~ForwardPass() = default;
ForwardPass::ForwardPass(ForwardPass&&) noexcept = default;
ForwardPass& ForwardPass::operator=(ForwardPass&&) noexcept = default;

std::vector<ClassProbs> ForwardPass::Probabilities() const {
  std::vector<ClassProbs> out(logits_.size());
  for (size_t n = 0; n < logits_.size(); ++n) out[n] = Softmax(logits_[n]);
  return out;
}

std::vector<double> ForwardPass::Backward(std::span<const Logits> d_logits,
                                          const ParamScope& scope) const {
  if (d_logits.size() != logits_.size()) {
    throw DimensionError("logit gradient batch size does not match the forward pass");
  }
  std::vector<double> grad(model_->num_params(), 0.0);
  internal::Tensor dz(static_cast<int>(logits_.size()), 2, 1, 1);
  for (size_t n = 0; n < d_logits.size(); ++n) {
    dz.v[2 * n] = d_logits[n][0];
    dz.v[2 * n + 1] = d_logits[n][1];
  }
  internal::BackwardContext ctx{model_->params(), model_->bn_states(), mode_, scope, grad};
  internal::BackwardLayers(model_->network().layers, tape_->layers, std::move(dz), ctx, false);
  return grad;
}

void UpdateRunningStats(DetectorModel& model, const std::vector<BatchMoments>& moments) {
  std::vector<BnState>& bn = model.mutable_bn_states();
  if (moments.size() != bn.size()) {
    throw DimensionError("batch moments do not match the model's BN layers");
  }
  for (size_t i = 0; i < bn.size(); ++i) {
    BnState& st = bn[i];
    const BatchMoments& bm = moments[i];
    if (bm.mean.size() != static_cast<size_t>(st.channels) ||
        bm.var.size() != static_cast<size_t>(st.channels)) {
      throw DimensionError("batch moments do not match BN layer " + std::to_string(i));
    }
    const double m = st.momentum;
    for (int c = 0; c < st.channels; ++c) {
      st.running_mean[c] = static_cast<float>((1.0 - m) * st.running_mean[c] + m * bm.mean[c]);
      st.running_var[c] = static_cast<float>((1.0 - m) * st.running_var[c] + m * bm.var[c]);
    }
  }
}

}  // namespace cloudadapt

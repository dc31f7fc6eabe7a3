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

// Private layer graph behind DetectorModel. Not installed.

#ifndef CLOUDADAPT_DETECTOR_NETWORK_H_
#define CLOUDADAPT_DETECTOR_NETWORK_H_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "cloudadapt/detector/arch.h"
#include "cloudadapt/detector/model.h"
#include "cloudadapt/detector/param_index.h"

namespace cloudadapt::internal {

// Dense NCHW activations.
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_), v(static_cast<size_t>(n_) * c_ * h_ * w_, 0.0) {}

  size_t plane() const { return static_cast<size_t>(h) * w; }
  double* channel(int i, int ch) { return v.data() + (static_cast<size_t>(i) * c + ch) * plane(); }
  const double* channel(int i, int ch) const {
    return v.data() + (static_cast<size_t>(i) * c + ch) * plane();
  }
  bool SameShape(const Tensor& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }
};

struct ConvOp {
  int in_ch = 0, out_ch = 0, kernel = 1, stride = 1, pad = 0;
  size_t w_off = 0;
  bool has_bias = false;
  size_t b_off = 0;
};

struct BnOp {
  int channels = 0;
  int bn_index = 0;
};

struct ReluOp {};

struct MaxPoolOp {
  int pool = 2;
};

struct GlobalAvgPoolOp {};

// Consumes the NCHW tensor flattened per item (C, H, W order).
struct LinearOp {
  int in_features = 0, out_features = 0;
  size_t w_off = 0, b_off = 0;  // weight is out x in, row-major
};

struct Layer;

// out = relu(body(x) + shortcut(x)); an empty shortcut is the identity.
struct ResidualOp {
  std::vector<Layer> body;
  std::vector<Layer> shortcut;
};

struct Layer {
  std::variant<ConvOp, BnOp, ReluOp, MaxPoolOp, GlobalAvgPoolOp, LinearOp, ResidualOp> op;
};

struct Network {
  std::vector<Layer> layers;
  std::vector<ParamRecord> records;
  // Per BN layer: channel count; offsets into the flat buffer live in
  // DetectorModel::bn_states().
  std::vector<int> bn_channels;
  std::vector<size_t> bn_gamma_offsets;
  std::vector<size_t> bn_beta_offsets;
  // Fan-in per weight record, used for initialization.
  std::vector<size_t> fan_in;
  size_t num_params = 0;
};

// Builds the layer graph and parameter layout for a validated arch.
Network BuildNetwork(const ArchConfig& arch);

struct LayerTape;

struct ForwardTape {
  std::vector<LayerTape> layers;
};

struct LayerTape {
  Tensor input;
  Tensor aux;                 // BN: normalized activations; residual: pre-ReLU sum
  std::vector<double> inv_std;  // BN
  std::vector<size_t> argmax;   // max pool
  std::vector<LayerTape> body, shortcut;
};

struct ForwardContext {
  std::span<const float> params;
  std::span<const BnState> bn;
  StatsMode mode = StatsMode::kEvalStats;
  std::vector<BatchMoments>* moments = nullptr;  // filled in TRAIN_STATS
};

// Runs `layers` on x. When `tapes` is non-null it receives one record per
// layer for a later backward pass.
Tensor RunLayers(const std::vector<Layer>& layers, Tensor x, const ForwardContext& ctx,
                 std::vector<LayerTape>* tapes);

struct BackwardContext {
  std::span<const float> params;
  std::span<const BnState> bn;
  StatsMode mode = StatsMode::kEvalStats;
  ParamScope scope;
  std::span<double> grad;
};

// Backpropagates `dout`. Returns the input gradient when `need_input_grad`,
// otherwise an empty tensor.
Tensor BackwardLayers(const std::vector<Layer>& layers, const std::vector<LayerTape>& tapes,
                      Tensor dout, const BackwardContext& ctx, bool need_input_grad);

Tensor CubesToTensor(std::span<const DataCube> batch, const ArchConfig& arch);

}  // namespace cloudadapt::internal

#endif  // CLOUDADAPT_DETECTOR_NETWORK_H_

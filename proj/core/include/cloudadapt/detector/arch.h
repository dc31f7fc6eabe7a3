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

#ifndef CLOUDADAPT_DETECTOR_ARCH_H_
#define CLOUDADAPT_DETECTOR_ARCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cloudadapt {

enum class ArchFamily { kPlain, kResidual };
enum class ResidualBlockKind { kBasic, kBottleneck };

// Plain family: Conv(kernel, stride 1, same padding) -> BN -> ReLU ->
// MaxPool(pool). pool == 1 means no pooling.
struct ConvBlockSpec {
  int filters = 0;
  int kernel = 3;
  int pool = 2;

  friend bool operator==(const ConvBlockSpec&, const ConvBlockSpec&) = default;
};

// Residual family stem: Conv(kernel, stride) -> BN -> ReLU -> MaxPool(pool).
struct StemSpec {
  int filters = 16;
  int kernel = 3;
  int stride = 1;
  int pool = 1;

  friend bool operator==(const StemSpec&, const StemSpec&) = default;
};

// A stage of `blocks` residual blocks. The first block applies `stride` and a
// 1x1 projection shortcut when the stride or channel count changes. `width`
// is the inner width of bottleneck blocks and ignored for basic blocks.
struct ResidualStageSpec {
  int blocks = 1;
  int width = 16;
  int out_channels = 16;
  int stride = 1;

  friend bool operator==(const ResidualStageSpec&,
                         const ResidualStageSpec&) = default;
};

struct ArchConfig {
  std::string preset_name;
  int input_height = 32;
  int input_width = 32;
  int input_channels = 3;

  ArchFamily family = ArchFamily::kPlain;
  std::vector<ConvBlockSpec> conv_blocks;  // plain family
  StemSpec stem;                           // residual family
  ResidualBlockKind block_kind = ResidualBlockKind::kBasic;
  std::vector<ResidualStageSpec> stages;   // residual family

  bool conv_bias = true;
  // Plain family only: global average pooling before the classifier.
  // Residual networks always pool globally.
  bool global_pool = false;
  // Classifier widths; hidden layers are followed by ReLU. Must end in 2.
  std::vector<int> fc = {2};

  double bn_epsilon = 1e-5;
  // Running-statistics momentum used during supervised training.
  double bn_momentum = 0.1;

  // Throws InvalidArgumentError for malformed settings and DimensionError if
  // the spatial size collapses below 1x1 anywhere in the stack.
  void Validate() const;

  friend bool operator==(const ArchConfig&, const ArchConfig&) = default;
};

// Desk-scale presets:
//   "cloudscout-mini"  32x32xC, blocks (8,3,2) (16,3,2) (32,3,2) (64,3,2),
//                      FC 64 -> 2.
//   "resnet-mini"      32x32xC, stem 16@3x3 + pool 2, basic stages
//                      16 / 32 (s2) / 64 (s2), global pool, FC 2.
// Full-size references for parameter accounting (not meant for training
// here):
//   "cloudscout"       512x512xC, blocks (128,5,8) (256,3,4) (256,3,4)
//                      (512,1,4), FC 512 -> 2.
//   "resnet50"         224x224xC, bottleneck stages 3/4/6/3, no conv bias,
//                      FC 2.
ArchConfig ArchPreset(const std::string& name, int channels);
std::vector<std::string> ArchPresetNames();

struct ParamBreakdown {
  size_t conv = 0;  // conv kernels and biases, including projections
  size_t bn = 0;    // BN gamma and beta
  size_t fc = 0;    // classifier weights and biases
  size_t total() const { return conv + bn + fc; }
};

// Closed-form trainable-parameter count from layer shapes alone.
ParamBreakdown AnalyticParamCount(const ArchConfig& arch);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DETECTOR_ARCH_H_

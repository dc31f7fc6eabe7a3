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

#include "cloudadapt/detector/arch.h"

#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt {
namespace {

int ConvOut(int size, int kernel, int stride) {
  return (size + 2 * (kernel / 2) - kernel) / stride + 1;
}

void CheckSpatial(int h, int w, const std::string& where) {
  if (h < 1 || w < 1) {
    throw DimensionError("spatial size reaches " + std::to_string(h) + "x" +
                         std::to_string(w) + " at " + where);
  }
}

void CheckPositive(int v, const char* what) {
  if (v < 1) throw InvalidArgumentError(std::string(what) + " must be >= 1");
}

size_t ConvParams(size_t in, size_t out, size_t kernel, bool bias) {
  return in * out * kernel * kernel + (bias ? out : 0);
}

}  // namespace

void ArchConfig::Validate() const {
  CheckPositive(input_height, "input height");
  CheckPositive(input_width, "input width");
  CheckPositive(input_channels, "input channels");
  if (fc.empty() || fc.back() != 2) {
    throw InvalidArgumentError("classifier must end in exactly 2 outputs");
  }
  for (int width : fc) CheckPositive(width, "FC width");
  if (!(bn_epsilon > 0.0)) throw InvalidArgumentError("BN epsilon must be > 0");
  if (!(bn_momentum > 0.0 && bn_momentum <= 1.0)) {
    throw InvalidArgumentError("BN momentum must lie in (0, 1]");
  }

  int h = input_height;
  int w = input_width;
  if (family == ArchFamily::kPlain) {
    if (conv_blocks.empty()) throw InvalidArgumentError("no conv blocks");
    for (size_t i = 0; i < conv_blocks.size(); ++i) {
      const ConvBlockSpec& b = conv_blocks[i];
      CheckPositive(b.filters, "filters");
      CheckPositive(b.pool, "pool");
      if (b.kernel < 1 || b.kernel % 2 == 0) {
        throw InvalidArgumentError("conv kernels must be odd and positive");
      }
      h /= b.pool;
      w /= b.pool;
      CheckSpatial(h, w, "conv block " + std::to_string(i));
    }
  } else {
    CheckPositive(stem.filters, "stem filters");
    CheckPositive(stem.stride, "stem stride");
    CheckPositive(stem.pool, "stem pool");
    if (stem.kernel < 1 || stem.kernel % 2 == 0) {
      throw InvalidArgumentError("conv kernels must be odd and positive");
    }
    h = ConvOut(h, stem.kernel, stem.stride) / stem.pool;
    w = ConvOut(w, stem.kernel, stem.stride) / stem.pool;
    CheckSpatial(h, w, "stem");
    if (stages.empty()) throw InvalidArgumentError("no residual stages");
    for (size_t i = 0; i < stages.size(); ++i) {
      const ResidualStageSpec& s = stages[i];
      CheckPositive(s.blocks, "stage blocks");
      CheckPositive(s.width, "stage width");
      CheckPositive(s.out_channels, "stage channels");
      CheckPositive(s.stride, "stage stride");
      h = ConvOut(h, 1, s.stride);
      w = ConvOut(w, 1, s.stride);
      CheckSpatial(h, w, "stage " + std::to_string(i));
    }
  }
}

ArchConfig ArchPreset(const std::string& name, int channels) {
  ArchConfig arch;
  arch.preset_name = name;
  arch.input_channels = channels;
  if (name == "cloudscout-mini") {
    arch.conv_blocks = {{8, 3, 2}, {16, 3, 2}, {32, 3, 2}, {64, 3, 2}};
    arch.fc = {64, 2};
  } else if (name == "resnet-mini") {
    arch.family = ArchFamily::kResidual;
    arch.conv_bias = false;
    arch.stem = {16, 3, 1, 2};
    arch.block_kind = ResidualBlockKind::kBasic;
    arch.stages = {{1, 16, 16, 1}, {1, 32, 32, 2}, {1, 64, 64, 2}};
    arch.fc = {2};
  } else if (name == "cloudscout") {
    arch.input_height = arch.input_width = 512;
    arch.conv_blocks = {{128, 5, 8}, {256, 3, 4}, {256, 3, 4}, {512, 1, 4}};
    arch.fc = {512, 2};
  } else if (name == "resnet50") {
    arch.input_height = arch.input_width = 224;
    arch.family = ArchFamily::kResidual;
    arch.conv_bias = false;
    arch.stem = {64, 7, 2, 2};
    arch.block_kind = ResidualBlockKind::kBottleneck;
    arch.stages = {{3, 64, 256, 1}, {4, 128, 512, 2}, {6, 256, 1024, 2},
                   {3, 512, 2048, 2}};
    arch.fc = {2};
  } else {
    throw InvalidArgumentError("unknown architecture preset '" + name + "'");
  }
  arch.Validate();
  return arch;
}

std::vector<std::string> ArchPresetNames() {
  return {"cloudscout-mini", "resnet-mini", "cloudscout", "resnet50"};
}

ParamBreakdown AnalyticParamCount(const ArchConfig& arch) {
  arch.Validate();
  ParamBreakdown count;
  const bool bias = arch.conv_bias;
  size_t features = 0;

  if (arch.family == ArchFamily::kPlain) {
    size_t in = arch.input_channels;
    size_t h = arch.input_height;
    size_t w = arch.input_width;
    for (const ConvBlockSpec& b : arch.conv_blocks) {
      count.conv += ConvParams(in, b.filters, b.kernel, bias);
      count.bn += 2 * static_cast<size_t>(b.filters);
      in = b.filters;
      h /= b.pool;
      w /= b.pool;
    }
    features = arch.global_pool ? in : in * h * w;
  } else {
    size_t in = arch.stem.filters;
    count.conv += ConvParams(arch.input_channels, in, arch.stem.kernel, bias);
    count.bn += 2 * in;
    for (const ResidualStageSpec& s : arch.stages) {
      for (int b = 0; b < s.blocks; ++b) {
        const int stride = b == 0 ? s.stride : 1;
        const size_t out = s.out_channels;
        if (arch.block_kind == ResidualBlockKind::kBasic) {
          count.conv += ConvParams(in, out, 3, bias) + ConvParams(out, out, 3, bias);
          count.bn += 4 * out;
        } else {
          const size_t mid = s.width;
          count.conv += ConvParams(in, mid, 1, bias) + ConvParams(mid, mid, 3, bias) +
                        ConvParams(mid, out, 1, bias);
          count.bn += 2 * (mid + mid + out);
        }
        if (stride != 1 || in != out) {
          count.conv += ConvParams(in, out, 1, bias);
          count.bn += 2 * out;
        }
        in = out;
      }
    }
    features = in;
  }

  for (int width : arch.fc) {
    count.fc += features * width + width;
    features = width;
  }
  return count;
}

}  // namespace cloudadapt

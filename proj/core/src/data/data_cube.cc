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

#include "cloudadapt/data/data_cube.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "cloudadapt/common/error.h"

namespace cloudadapt {

const std::vector<BandDescriptor>& Sentinel2Bands() {
  static const std::vector<BandDescriptor> kBands = {
      {"B1", 442.7},  {"B2", 492.4},  {"B3", 559.8},  {"B4", 664.6},
      {"B5", 704.1},  {"B6", 740.5},  {"B7", 782.8},  {"B8", 832.8},
      {"B8A", 864.7}, {"B9", 945.1},  {"B10", 1373.5}, {"B11", 1613.7},
      {"B12", 2202.4},
  };
  return kBands;
}

namespace {

void CheckExtents(int height, int width, size_t channels) {
  if (height < 1 || width < 1 || channels < 1) {
    throw DimensionError("cube extents must be >= 1, got " +
                         std::to_string(height) + "x" + std::to_string(width) +
                         "x" + std::to_string(channels));
  }
}

}  // namespace

DataCube::DataCube(int height, int width, std::vector<BandDescriptor> bands)
    : height_(height), width_(width), bands_(std::move(bands)) {
  CheckExtents(height_, width_, bands_.size());
  pixels_.assign(static_cast<size_t>(height_) * width_ * bands_.size(), 0.0f);
}

DataCube::DataCube(int height, int width, std::vector<BandDescriptor> bands,
                   std::vector<float> pixels)
    : height_(height),
      width_(width),
      bands_(std::move(bands)),
      pixels_(std::move(pixels)) {
  CheckExtents(height_, width_, bands_.size());
  const size_t expected = static_cast<size_t>(height_) * width_ * bands_.size();
  if (pixels_.size() != expected) {
    throw DimensionError("pixel buffer holds " + std::to_string(pixels_.size()) +
                         " values, expected " + std::to_string(expected));
  }
  ValidateFinite();
}

void DataCube::ValidateFinite() const {
  for (size_t i = 0; i < pixels_.size(); ++i) {
    if (!std::isfinite(pixels_[i])) {
      throw InvalidArgumentError("non-finite pixel at flat offset " +
                                 std::to_string(i));
    }
  }
}

bool operator==(const DataCube& a, const DataCube& b) {
  return a.height_ == b.height_ && a.width_ == b.width_ && a.bands_ == b.bands_ &&
         a.pixels_.size() == b.pixels_.size() &&
         std::memcmp(a.pixels_.data(), b.pixels_.data(),
                     a.pixels_.size() * sizeof(float)) == 0;
}

CloudMask::CloudMask(int height, int width) : height_(height), width_(width) {
  CheckExtents(height, width, 1);
  pixels_.assign(static_cast<size_t>(height) * width, 0);
}

CloudMask::CloudMask(int height, int width, std::vector<uint8_t> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  CheckExtents(height, width, 1);
  if (pixels_.size() != static_cast<size_t>(height) * width) {
    throw DimensionError("mask buffer size does not match extents");
  }
  for (uint8_t p : pixels_) {
    if (p > 1) throw InvalidArgumentError("mask entries must be 0 or 1");
  }
}

size_t CloudMask::CloudyCount() const {
  return static_cast<size_t>(std::count(pixels_.begin(), pixels_.end(), 1));
}

double CloudMask::CloudyFraction() const {
  if (pixels_.empty()) throw DimensionError("empty cloud mask");
  return static_cast<double>(CloudyCount()) / static_cast<double>(pixels_.size());
}

const char* SplitName(Split split) {
  return split == Split::kTrain ? "TRAIN" : "TEST";
}

Split ParseSplit(const std::string& name) {
  if (name == "TRAIN") return Split::kTrain;
  if (name == "TEST") return Split::kTest;
  throw InvalidArgumentError("unknown split '" + name + "'");
}

const DataCube& LabeledDataset::front_cube() const {
  if (items.empty()) throw DimensionError("dataset '" + name + "' is empty");
  return items.front().cube;
}

std::vector<DataCube> LabeledDataset::Cubes() const {
  std::vector<DataCube> cubes;
  cubes.reserve(items.size());
  for (const auto& item : items) cubes.push_back(item.cube);
  return cubes;
}

std::vector<int> LabeledDataset::Labels() const {
  std::vector<int> labels;
  labels.reserve(items.size());
  for (const auto& item : items) labels.push_back(item.label);
  return labels;
}

void LabeledDataset::Validate() const {
  for (size_t i = 0; i < items.size(); ++i) {
    if (!items[i].cube.SameShape(items.front().cube)) {
      throw DimensionError("dataset '" + name + "': item " + std::to_string(i) +
                           " has a different shape");
    }
    if (items[i].label != 0 && items[i].label != 1) {
      throw InvalidArgumentError("dataset '" + name + "': item " +
                                 std::to_string(i) + " label not in {0,1}");
    }
  }
}

ShiftConfig ShiftConfig::Identity(int channels) {
  ShiftConfig shift;
  shift.gain.assign(channels, 1.0);
  shift.offset.assign(channels, 0.0);
  return shift;
}

void ShiftConfig::Validate(int channels) const {
  if (static_cast<int>(gain.size()) != channels ||
      static_cast<int>(offset.size()) != channels) {
    throw DimensionError("shift gain/offset length must equal channel count " +
                         std::to_string(channels));
  }
  for (double g : gain) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw InvalidArgumentError("shift gains must be finite and > 0");
    }
  }
  for (double o : offset) {
    if (!std::isfinite(o)) throw InvalidArgumentError("shift offsets must be finite");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgumentError("shift noise sigma must be >= 0");
  }
}

bool ShiftConfig::IsIdentity() const {
  return noise_sigma == 0.0 &&
         std::all_of(gain.begin(), gain.end(), [](double g) { return g == 1.0; }) &&
         std::all_of(offset.begin(), offset.end(),
                     [](double o) { return o == 0.0; });
}

}  // namespace cloudadapt

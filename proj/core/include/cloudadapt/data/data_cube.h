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

#ifndef CLOUDADAPT_DATA_DATA_CUBE_H_
#define CLOUDADAPT_DATA_DATA_CUBE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cloudadapt {

struct BandDescriptor {
  std::string id;
  std::optional<double> wavelength_nm;

  friend bool operator==(const BandDescriptor&, const BandDescriptor&) = default;
};

// The 13 Sentinel-2 MSI bands with their nominal central wavelengths.
const std::vector<BandDescriptor>& Sentinel2Bands();

// An H x W x C multispectral tile. Pixels are stored row-major with the band
// index fastest (HWC), which is also the on-disk layout.
class DataCube {
 public:
  DataCube() = default;
  // Zero-filled cube. Throws DimensionError unless all extents are >= 1 and
  // bands.size() equals the channel count implied by `bands`.
  DataCube(int height, int width, std::vector<BandDescriptor> bands);
  // Takes ownership of `pixels`; validates size and finiteness.
  DataCube(int height, int width, std::vector<BandDescriptor> bands,
           std::vector<float> pixels);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return static_cast<int>(bands_.size()); }
  size_t size() const { return pixels_.size(); }

  float at(int y, int x, int c) const { return pixels_[Offset(y, x, c)]; }
  float& at(int y, int x, int c) { return pixels_[Offset(y, x, c)]; }

  std::span<const float> pixels() const { return pixels_; }
  std::span<float> mutable_pixels() { return pixels_; }
  const std::vector<BandDescriptor>& bands() const { return bands_; }

  bool SameShape(const DataCube& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels() == other.channels();
  }

  // Throws if any pixel is NaN or infinite.
  void ValidateFinite() const;

  // Bitwise equality of pixel buffers plus metadata equality.
  friend bool operator==(const DataCube& a, const DataCube& b);

 private:
  size_t Offset(int y, int x, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * bands_.size() + c;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<BandDescriptor> bands_;
  std::vector<float> pixels_;
};

// Binary per-pixel cloud mask, 1 = cloudy.
class CloudMask {
 public:
  CloudMask() = default;
  CloudMask(int height, int width);
  // Throws InvalidArgumentError if an entry is not exactly 0 or 1.
  CloudMask(int height, int width, std::vector<uint8_t> pixels);

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return pixels_.size(); }

  uint8_t at(int y, int x) const { return pixels_[Offset(y, x)]; }
  void set(int y, int x, bool cloudy) { pixels_[Offset(y, x)] = cloudy ? 1 : 0; }

  std::span<const uint8_t> pixels() const { return pixels_; }
  size_t CloudyCount() const;
  double CloudyFraction() const;

  friend bool operator==(const CloudMask&, const CloudMask&) = default;

 private:
  size_t Offset(int y, int x) const {
    return static_cast<size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<uint8_t> pixels_;
};

enum class Split { kTrain, kTest };

const char* SplitName(Split split);
Split ParseSplit(const std::string& name);

struct LabeledItem {
  DataCube cube;
  int label = 0;  // 0 = not cloudy, 1 = cloudy

  friend bool operator==(const LabeledItem&, const LabeledItem&) = default;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  // Cloud-fraction threshold used to derive the labels.
  double threshold = 0.0;
  Split split = Split::kTrain;
  std::string name;
  // Generator seed, kept for provenance only.
  uint64_t seed = 0;

  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  // Shared cube geometry; throws on an empty dataset.
  const DataCube& front_cube() const;

  std::vector<DataCube> Cubes() const;
  std::vector<int> Labels() const;

  // Throws DimensionError if cubes differ in shape and InvalidArgumentError
  // for labels outside {0, 1}.
  void Validate() const;

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

// Band-wise affine sensor shift plus additive Gaussian noise:
//   target = gain[c] * source + offset[c] + noise_sigma * N(0, 1)
struct ShiftConfig {
  std::vector<double> gain;
  std::vector<double> offset;
  double noise_sigma = 0.0;
  uint64_t seed = 0;

  static ShiftConfig Identity(int channels);

  // Throws unless lengths equal `channels`, gains > 0 and sigma >= 0.
  void Validate(int channels) const;
  bool IsIdentity() const;
};

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DATA_DATA_CUBE_H_

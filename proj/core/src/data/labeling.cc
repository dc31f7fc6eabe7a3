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

#include "cloudadapt/data/labeling.h"

#include <cmath>
#include <numeric>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/random.h"

namespace cloudadapt {

std::vector<Tile> TileCube(const DataCube& cube, const CloudMask& mask, int tile) {
  if (tile < 1) throw DimensionError("tile size must be positive");
  if (mask.height() != cube.height() || mask.width() != cube.width()) {
    throw DimensionError("mask and cube spatial extents differ");
  }
  if (cube.height() % tile != 0 || cube.width() % tile != 0) {
    throw DimensionError("tile size " + std::to_string(tile) +
                         " does not divide " + std::to_string(cube.height()) +
                         "x" + std::to_string(cube.width()));
  }
  const int rows = cube.height() / tile;
  const int cols = cube.width() / tile;
  const int channels = cube.channels();

  std::vector<Tile> tiles;
  tiles.reserve(static_cast<size_t>(rows) * cols);
  for (int ty = 0; ty < rows; ++ty) {
    for (int tx = 0; tx < cols; ++tx) {
      Tile t{DataCube(tile, tile, cube.bands()), CloudMask(tile, tile)};
      for (int y = 0; y < tile; ++y) {
        for (int x = 0; x < tile; ++x) {
          const int sy = ty * tile + y;
          const int sx = tx * tile + x;
          for (int c = 0; c < channels; ++c) t.cube.at(y, x, c) = cube.at(sy, sx, c);
          t.mask.set(y, x, mask.at(sy, sx) != 0);
        }
      }
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

int LabelByThreshold(const CloudMask& mask, double tau) {
  if (mask.size() == 0) throw DimensionError("empty cloud mask");
  // Integer comparison avoids rounding in count / total.
  const double cloudy = static_cast<double>(mask.CloudyCount());
  const double total = static_cast<double>(mask.size());
  return cloudy > tau * total ? 1 : 0;
}

ThresholdDatasets BuildThresholdDatasets(std::span<const Tile> tiles,
                                         double split_ratio, uint64_t seed) {
  if (tiles.empty()) throw InvalidArgumentError("no tiles to label");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw InvalidArgumentError("split ratio must lie in (0, 1)");
  }
  std::vector<size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(order);

  const size_t n_train = static_cast<size_t>(
      std::llround(split_ratio * static_cast<double>(tiles.size())));

  ThresholdDatasets out;
  auto init = [&](LabeledDataset& ds, double tau, Split split, const char* tag) {
    ds.threshold = tau;
    ds.split = split;
    ds.seed = seed;
    ds.name = std::string(tag) + "-" + (split == Split::kTrain ? "train" : "test");
  };
  init(out.low.train, kLowCloudThreshold, Split::kTrain, "th30");
  init(out.low.test, kLowCloudThreshold, Split::kTest, "th30");
  init(out.high.train, kHighCloudThreshold, Split::kTrain, "th70");
  init(out.high.test, kHighCloudThreshold, Split::kTest, "th70");

  for (size_t rank = 0; rank < order.size(); ++rank) {
    const Tile& t = tiles[order[rank]];
    const bool train = rank < n_train;
    LabeledDataset& low = train ? out.low.train : out.low.test;
    LabeledDataset& high = train ? out.high.train : out.high.test;
    low.items.push_back({t.cube, LabelByThreshold(t.mask, kLowCloudThreshold)});
    high.items.push_back({t.cube, LabelByThreshold(t.mask, kHighCloudThreshold)});
  }
  out.low.train.Validate();
  out.high.train.Validate();
  return out;
}

DataCube BandSelect(const DataCube& cube, std::span<const int> indices) {
  if (indices.empty()) throw InvalidArgumentError("band selection is empty");
  std::vector<bool> seen(cube.channels(), false);
  std::vector<BandDescriptor> bands;
  for (int idx : indices) {
    if (idx < 0 || idx >= cube.channels()) {
      throw InvalidArgumentError("band index " + std::to_string(idx) +
                                 " out of range for " +
                                 std::to_string(cube.channels()) + " bands");
    }
    if (seen[idx]) {
      throw InvalidArgumentError("band index " + std::to_string(idx) +
                                 " selected twice");
    }
    seen[idx] = true;
    bands.push_back(cube.bands()[idx]);
  }
  DataCube out(cube.height(), cube.width(), std::move(bands));
  const int n = static_cast<int>(indices.size());
  for (int y = 0; y < cube.height(); ++y) {
    for (int x = 0; x < cube.width(); ++x) {
      for (int c = 0; c < n; ++c) out.at(y, x, c) = cube.at(y, x, indices[c]);
    }
  }
  return out;
}

}  // namespace cloudadapt

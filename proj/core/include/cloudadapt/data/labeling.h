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

#ifndef CLOUDADAPT_DATA_LABELING_H_
#define CLOUDADAPT_DATA_LABELING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "cloudadapt/data/data_cube.h"

namespace cloudadapt {

// Cloud-fraction thresholds for the two source labelings. The extractor is
// trained on the low-threshold labels, the classifier on the high one.
inline constexpr double kLowCloudThreshold = 0.30;
inline constexpr double kHighCloudThreshold = 0.70;

struct Tile {
  DataCube cube;
  CloudMask mask;
};

// Cuts `cube` and `mask` into non-overlapping tile x tile pieces in row-major
// tile order. `tile` must divide both spatial extents; partial tiles are
// rejected with DimensionError rather than padded.
std::vector<Tile> TileCube(const DataCube& cube, const CloudMask& mask, int tile);

// 1 iff the cloudy-pixel fraction is strictly greater than tau. With tau = 1
// no mask is ever labeled cloudy.
int LabelByThreshold(const CloudMask& mask, double tau);

struct SplitPair {
  LabeledDataset train;
  LabeledDataset test;
};

struct ThresholdDatasets {
  SplitPair low;   // tau = 0.30
  SplitPair high;  // tau = 0.70
};

// Labels every tile at both thresholds and splits the tiles TRAIN/TEST with a
// single seeded shuffle, so both labelings share split membership and order.
// The TRAIN split receives round(split_ratio * N) tiles.
ThresholdDatasets BuildThresholdDatasets(std::span<const Tile> tiles,
                                         double split_ratio, uint64_t seed);

// Copies the listed bands, in the listed order. Throws InvalidArgumentError
// for out-of-range or repeated indices.
DataCube BandSelect(const DataCube& cube, std::span<const int> indices);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DATA_LABELING_H_

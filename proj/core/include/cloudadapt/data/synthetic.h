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

// Procedural source/target scene generator.
//
// A scene is a textured dark background with bright Gaussian-blob clouds.
// The cloud fraction of every scene is drawn first and the mask is cut from a
// smooth density field at the matching quantile, so cloud cover is uniform on
// [0, 1] and both threshold labelings are well populated. The target domain
// is the same scenes seen through a different "sensor": a per-band affine
// response plus additive noise (ShiftConfig). Masks, and therefore labels,
// are fixed before the shift is applied.
//
// All generator constants live in SceneStyle / the shift presets below.

#ifndef CLOUDADAPT_DATA_SYNTHETIC_H_
#define CLOUDADAPT_DATA_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/data/labeling.h"

namespace cloudadapt {

struct SceneGeometry {
  int height = 32;
  int width = 32;
  int channels = 3;
};

struct SceneStyle {
  // Background texture: two octaves of bilinear value noise.
  int coarse_cell = 8;
  int fine_cell = 4;
  double coarse_amplitude = 0.05;
  double fine_amplitude = 0.025;
  // Number of Gaussian blobs in a cloud density field: 1 + Below(max_extra).
  int max_extra_blobs = 4;
  // Blob standard deviation as a fraction of the tile side.
  double blob_sigma_min = 0.10;
  double blob_sigma_max = 0.35;
  // Relative weight of value noise added to the blob density (ragged edges).
  double density_noise = 0.35;
  // Multiplicative texture inside clouds, 1 +/- cloud_texture.
  double cloud_texture = 0.08;
  // Per-pixel sensor noise of the source instrument.
  double sensor_sigma = 0.01;
};

// Ground and cloud reflectance for a band, from its central wavelength.
// Bands without a wavelength use the visible-range profile.
double GroundReflectance(const BandDescriptor& band);
double CloudReflectance(const BandDescriptor& band);

// Band descriptors for a synthetic cube with `channels` bands. Three bands map
// to Sentinel-2 B1, B2 and B8A; otherwise the first `channels` Sentinel-2
// bands are used, and synthetic ids beyond 13.
std::vector<BandDescriptor> SyntheticBands(int channels);

struct Scene {
  DataCube cube;
  CloudMask mask;
};

// One source-domain scene, a pure function of (geometry, style, seed).
Scene SynthScene(const SceneGeometry& geometry, const SceneStyle& style,
                 uint64_t seed);

// Applies `shift` to `cube`. `stream` selects the noise sub-stream so every
// item of a dataset gets independent noise. The identity shift returns the
// input bit-exactly.
DataCube ApplyShift(const DataCube& cube, const ShiftConfig& shift,
                    uint64_t stream);

// Both labelings of one domain, with TRAIN and TEST splits of equal size.
struct DomainSplits {
  SplitPair low;   // TH30
  SplitPair high;  // TH70
};

struct DomainPair {
  DomainSplits source;
  DomainSplits target;
};

// Generates n_per_split TRAIN and n_per_split TEST scenes. Target cubes are
// the source cubes passed through `shift`; labels are shared.
DomainPair SynthDomainPair(int n_per_split, const SceneGeometry& geometry,
                           const ShiftConfig& shift, uint64_t seed,
                           const SceneStyle& style = {});

// Named shift presets. Per-band values cycle when channels exceeds the
// table:
//   none    identity
//   mild    gain (0.95, 0.97, 0.93), offset (0.05, 0.04, 0.03), sigma 0.01
//   strong  gain (0.55, 0.60, 0.50), offset (0.45, 0.36, 0.27), sigma 0.02
// A dimmer, hazier instrument; "strong" is the mission fixture's shift. Throws InvalidArgumentError for an
// unknown name.
ShiftConfig ShiftPreset(const std::string& name, int channels, uint64_t seed);
std::vector<std::string> ShiftPresetNames();

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DATA_SYNTHETIC_H_

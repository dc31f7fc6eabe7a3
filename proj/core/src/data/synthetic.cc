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

#include "cloudadapt/data/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/random.h"

namespace cloudadapt {
namespace {

// Bilinear value noise in [-1, 1] on a lattice with spacing `cell` pixels,
// smoothstep-interpolated.
std::vector<double> ValueNoise(int height, int width, int cell, Rng& rng) {
  const int gh = height / cell + 2;
  const int gw = width / cell + 2;
  std::vector<double> lattice(static_cast<size_t>(gh) * gw);
  for (double& v : lattice) v = rng.Uniform(-1.0, 1.0);

  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  std::vector<double> out(static_cast<size_t>(height) * width);
  for (int y = 0; y < height; ++y) {
    const double fy = static_cast<double>(y) / cell;
    const int y0 = static_cast<int>(fy);
    const double ty = smooth(fy - y0);
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / cell;
      const int x0 = static_cast<int>(fx);
      const double tx = smooth(fx - x0);
      const double a = lattice[static_cast<size_t>(y0) * gw + x0];
      const double b = lattice[static_cast<size_t>(y0) * gw + x0 + 1];
      const double c = lattice[static_cast<size_t>(y0 + 1) * gw + x0];
      const double d = lattice[static_cast<size_t>(y0 + 1) * gw + x0 + 1];
      const double top = a + (b - a) * tx;
      const double bottom = c + (d - c) * tx;
      out[static_cast<size_t>(y) * width + x] = top + (bottom - top) * ty;
    }
  }
  return out;
}

double BandWavelength(const BandDescriptor& band) {
  return band.wavelength_nm.value_or(550.0);
}

}  // namespace

double GroundReflectance(const BandDescriptor& band) {
  const double nm = BandWavelength(band);
  if (nm < 700.0) return 0.05 + 0.06 * std::clamp((nm - 440.0) / 260.0, 0.0, 1.0);
  if (nm < 1100.0) return 0.30;
  if (nm < 1450.0) return 0.01;  // water-vapour absorption (cirrus band)
  if (nm < 2000.0) return 0.22;
  return 0.15;
}

double CloudReflectance(const BandDescriptor& band) {
  const double nm = BandWavelength(band);
  if (nm < 1100.0) return 0.78 - 0.05 * std::clamp((nm - 440.0) / 500.0, 0.0, 1.0);
  if (nm < 1450.0) return 0.35;
  if (nm < 2000.0) return 0.45;
  return 0.30;
}

std::vector<BandDescriptor> SyntheticBands(int channels) {
  if (channels < 1) throw DimensionError("channel count must be >= 1");
  const auto& s2 = Sentinel2Bands();
  if (channels == 3) return {s2[0], s2[1], s2[8]};
  std::vector<BandDescriptor> bands;
  for (int c = 0; c < channels; ++c) {
    if (c < static_cast<int>(s2.size())) {
      bands.push_back(s2[c]);
    } else {
      bands.push_back({"S" + std::to_string(c + 1), std::nullopt});
    }
  }
  return bands;
}

Scene SynthScene(const SceneGeometry& geometry, const SceneStyle& style,
                 uint64_t seed) {
  const int h = geometry.height;
  const int w = geometry.width;
  const int channels = geometry.channels;
  if (h < 1 || w < 1 || channels < 1) {
    throw DimensionError("scene geometry must be positive");
  }
  Rng rng(seed);
  const double fraction = rng.Uniform();

  const std::vector<double> coarse = ValueNoise(h, w, style.coarse_cell, rng);
  const std::vector<double> fine = ValueNoise(h, w, style.fine_cell, rng);

  // Cloud density: Gaussian blobs plus ragged-edge noise.
  const int blobs =
      1 + (style.max_extra_blobs > 0
               ? static_cast<int>(rng.Below(style.max_extra_blobs))
               : 0);
  const double side = std::min(h, w);
  std::vector<double> density(static_cast<size_t>(h) * w, 0.0);
  for (int k = 0; k < blobs; ++k) {
    const double cy = rng.Uniform(0.0, h);
    const double cx = rng.Uniform(0.0, w);
    const double sigma =
        rng.Uniform(style.blob_sigma_min, style.blob_sigma_max) * side;
    const double amp = rng.Uniform(0.5, 1.0);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dy = y - cy;
        const double dx = x - cx;
        density[static_cast<size_t>(y) * w + x] +=
            amp * std::exp(-(dy * dy + dx * dx) * inv);
      }
    }
  }
  const std::vector<double> ragged = ValueNoise(h, w, style.fine_cell, rng);
  for (size_t i = 0; i < density.size(); ++i) {
    density[i] += style.density_noise * ragged[i];
  }

  // Cut the mask at the quantile that yields exactly round(fraction * HW)
  // cloudy pixels; ties in density go to the lower flat index.
  const size_t total = density.size();
  const size_t cloudy = static_cast<size_t>(
      std::llround(fraction * static_cast<double>(total)));
  std::vector<size_t> order(total);
  std::iota(order.begin(), order.end(), size_t{0});
  auto denser = [&](size_t a, size_t b) {
    return density[a] != density[b] ? density[a] > density[b] : a < b;
  };
  if (cloudy > 0 && cloudy < total) {
    std::nth_element(order.begin(), order.begin() + cloudy, order.end(), denser);
  }
  std::vector<uint8_t> mask_pixels(total, 0);
  for (size_t i = 0; i < cloudy; ++i) mask_pixels[order[i]] = 1;

  const std::vector<BandDescriptor> bands = SyntheticBands(channels);
  std::vector<double> ground(channels), cloud(channels);
  for (int c = 0; c < channels; ++c) {
    ground[c] = GroundReflectance(bands[c]);
    cloud[c] = CloudReflectance(bands[c]);
  }

  std::vector<float> pixels(total * channels);
  for (size_t i = 0; i < total; ++i) {
    const double texture =
        style.coarse_amplitude * coarse[i] + style.fine_amplitude * fine[i];
    for (int c = 0; c < channels; ++c) {
      double v;
      if (mask_pixels[i]) {
        v = cloud[c] * (1.0 + style.cloud_texture * fine[i]);
      } else {
        v = std::max(0.01, ground[c] + texture);
      }
      v += style.sensor_sigma * rng.Normal();
      pixels[i * channels + c] = static_cast<float>(std::max(0.0, v));
    }
  }

  return Scene{DataCube(h, w, bands, std::move(pixels)),
               CloudMask(h, w, std::move(mask_pixels))};
}

DataCube ApplyShift(const DataCube& cube, const ShiftConfig& shift,
                    uint64_t stream) {
  shift.Validate(cube.channels());
  if (shift.IsIdentity()) return cube;
  Rng rng(MixSeed(shift.seed, stream));
  DataCube out = cube;
  std::span<float> px = out.mutable_pixels();
  const size_t channels = static_cast<size_t>(cube.channels());
  for (size_t i = 0; i < px.size(); ++i) {
    const size_t c = i % channels;
    double v = shift.gain[c] * px[i] + shift.offset[c];
    if (shift.noise_sigma > 0.0) v += shift.noise_sigma * rng.Normal();
    px[i] = static_cast<float>(v);
  }
  return out;
}

DomainPair SynthDomainPair(int n_per_split, const SceneGeometry& geometry,
                           const ShiftConfig& shift, uint64_t seed,
                           const SceneStyle& style) {
  if (n_per_split < 2) throw InvalidArgumentError("n_per_split must be >= 2");
  if (geometry.channels < 1) throw DimensionError("channel count must be >= 1");
  shift.Validate(geometry.channels);

  DomainPair pair;
  auto init = [&](DomainSplits& d, const std::string& domain) {
    auto set = [&](LabeledDataset& ds, double tau, Split split,
                   const std::string& tag) {
      ds.threshold = tau;
      ds.split = split;
      ds.seed = seed;
      ds.name = domain + "-" + tag + "-" +
                (split == Split::kTrain ? "train" : "test");
    };
    set(d.low.train, kLowCloudThreshold, Split::kTrain, "th30");
    set(d.low.test, kLowCloudThreshold, Split::kTest, "th30");
    set(d.high.train, kHighCloudThreshold, Split::kTrain, "th70");
    set(d.high.test, kHighCloudThreshold, Split::kTest, "th70");
  };
  init(pair.source, "source");
  init(pair.target, "target");

  for (int i = 0; i < 2 * n_per_split; ++i) {
    Scene scene = SynthScene(geometry, style, MixSeed(seed, i));
    const int low = LabelByThreshold(scene.mask, kLowCloudThreshold);
    const int high = LabelByThreshold(scene.mask, kHighCloudThreshold);
    DataCube shifted = ApplyShift(scene.cube, shift, static_cast<uint64_t>(i));
    const bool train = i < n_per_split;
    SplitPair& src_low = pair.source.low;
    SplitPair& src_high = pair.source.high;
    SplitPair& tgt_low = pair.target.low;
    SplitPair& tgt_high = pair.target.high;
    (train ? src_low.train : src_low.test).items.push_back({scene.cube, low});
    (train ? src_high.train : src_high.test).items.push_back({scene.cube, high});
    (train ? tgt_low.train : tgt_low.test).items.push_back({shifted, low});
    (train ? tgt_high.train : tgt_high.test).items.push_back(
        {std::move(shifted), high});
  }
  return pair;
}

std::vector<std::string> ShiftPresetNames() { return {"none", "mild", "strong"}; }

ShiftConfig ShiftPreset(const std::string& name, int channels, uint64_t seed) {
  if (channels < 1) throw DimensionError("channel count must be >= 1");
  // Per-band tables, cycled for wider cubes.
  std::array<double, 3> gain{};
  std::array<double, 3> offset{};
  double sigma = 0.0;
  if (name == "none") {
    ShiftConfig identity = ShiftConfig::Identity(channels);
    identity.seed = seed;
    return identity;
  } else if (name == "mild") {
    gain = {0.95, 0.97, 0.93};
    offset = {0.05, 0.04, 0.03};
    sigma = 0.01;
  } else if (name == "strong") {
    gain = {0.55, 0.60, 0.50};
    offset = {0.45, 0.36, 0.27};
    sigma = 0.02;
  } else {
    throw InvalidArgumentError("unknown shift preset '" + name +
                               "' (expected none, mild or strong)");
  }
  ShiftConfig shift;
  for (int c = 0; c < channels; ++c) {
    shift.gain.push_back(gain[c % gain.size()]);
    shift.offset.push_back(offset[c % offset.size()]);
  }
  shift.noise_sigma = sigma;
  shift.seed = seed;
  return shift;
}

}  // namespace cloudadapt

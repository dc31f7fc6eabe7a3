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

#include "cloudadapt/tta/dua.h"

#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/common/random.h"

namespace cloudadapt {

void DUAConfig::Validate() const {
  if (!(omega > 0.0 && omega < 1.0)) throw InvalidArgumentError("DUA omega must be in (0, 1)");
  if (!(delta_floor > 0.0)) throw InvalidArgumentError("DUA delta must be > 0");
  if (!(m0 > 0.0 && m0 <= 1.0)) throw InvalidArgumentError("DUA m0 must be in (0, 1]");
  if (!(delta_floor / (1.0 - omega) < 1.0)) {
    throw InvalidArgumentError("DUA momentum fixed point delta / (1 - omega) must be < 1");
  }
  if (augment_factor < 1) throw InvalidArgumentError("DUA augment factor must be >= 1");
}

DataCube AugmentCube(const DataCube& cube, bool flip, int quarter_turns) {
  const int h = cube.height(), w = cube.width(), c = cube.channels();
  const int turns = ((quarter_turns % 4) + 4) % 4;
  if (turns % 2 == 1 && h != w) {
    throw DimensionError("quarter-turn rotation needs a square cube");
  }
  DataCube out(h, w, cube.bands());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Source pixel for output (y, x): undo the rotation, then the flip.
      int sy = y, sx = x;
      for (int t = 0; t < turns; ++t) {
        const int ny = sx, nx = w - 1 - sy;  // inverse of one CCW quarter turn
        sy = ny;
        sx = nx;
      }
      if (flip) sx = w - 1 - sx;
      for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = cube.at(sy, sx, ch);
    }
  }
  return out;
}

std::vector<DataCube> AugmentBatch(std::span<const DataCube> batch, int augment_factor,
                                   uint64_t seed, uint64_t call) {
  std::vector<DataCube> out;
  out.reserve(batch.size() * static_cast<size_t>(augment_factor));
  Rng rng(MixSeed(seed, call));
  for (const DataCube& cube : batch) {
    out.push_back(cube);
    const bool square = cube.height() == cube.width();
    for (int a = 1; a < augment_factor; ++a) {
      // Non-identity elements of the dihedral group (or of its rectangle
      // subgroup for non-square cubes).
      int code;
      if (square) {
        code = 1 + static_cast<int>(rng.Below(7));
      } else {
        const int options[3] = {1, 4, 5};
        code = options[rng.Below(3)];
      }
      out.push_back(AugmentCube(cube, (code & 1) != 0, code >> 1));
    }
  }
  return out;
}

DuaAdapter::DuaAdapter(const DUAConfig& cfg) : cfg_(cfg), m_(cfg.m0) { cfg_.Validate(); }

void DuaAdapter::Adapt(DetectorModel& model, std::span<const DataCube> batch,
                       AdaptReport& report) {
  if (batch.empty()) throw InvalidArgumentError("DUA: empty batch");
  std::vector<BatchMoments> moments;
  if (cfg_.augment_factor > 1) {
    const std::vector<DataCube> expanded =
        AugmentBatch(batch, cfg_.augment_factor, cfg_.seed, calls_);
    moments = ForwardPass(model, expanded, StatsMode::kTrainStats).batch_moments();
  } else {
    moments = ForwardPass(model, batch, StatsMode::kTrainStats).batch_moments();
  }
  m_ = m_ * cfg_.omega + cfg_.delta_floor;
  for (BnState& st : model.mutable_bn_states()) st.momentum = m_;
  UpdateRunningStats(model, moments);
  model.set_mode(StatsMode::kEvalStats);
  report.momentum_trace.push_back(m_);
  ++calls_;
}

}  // namespace cloudadapt

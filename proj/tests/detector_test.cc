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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "cloudadapt/common/error.h"
#include "cloudadapt/detector/arch.h"
#include "cloudadapt/detector/checkpoint.h"
#include "cloudadapt/detector/model.h"
#include "oracles.h"

namespace cloudadapt {
namespace {

using testing::RandomCube;
using testing::RandomDataset;
using testing::TempDir;
using testing::TinyPlainArch;
using testing::TinyResidualArch;

TEST(Arch, TinyPlainHas166Parameters) {
  // conv 2*9 + 2, BN 2 + 2, FC 32*4 + 4 and 4*2 + 2.
  const ParamBreakdown b = AnalyticParamCount(TinyPlainArch());
  EXPECT_EQ(b.conv, 20u);
  EXPECT_EQ(b.bn, 4u);
  EXPECT_EQ(b.fc, 142u);
  EXPECT_EQ(BuildModel(TinyPlainArch(), 1).num_params(), 166u);
}

TEST(Arch, BuiltModelsMatchAnalyticCount) {
  for (const ArchConfig& a : {ArchPreset("cloudscout-mini", 3), ArchPreset("resnet-mini", 3),
                              ArchPreset("cloudscout-mini", 13), TinyResidualArch()}) {
    EXPECT_EQ(BuildModel(a, 1).num_params(), AnalyticParamCount(a).total()) << a.preset_name;
  }
}

TEST(Arch, FullSizePresetsReproducePublishedTotals) {
  EXPECT_EQ(AnalyticParamCount(ArchPreset("cloudscout", 3)).total(), 1292546u);
  EXPECT_EQ(AnalyticParamCount(ArchPreset("resnet50", 3)).total(), 23512130u);
}

TEST(Arch, ValidateRejectsCollapsedSpatialSize) {
  ArchConfig a = TinyPlainArch();
  a.conv_blocks = {{2, 3, 2}, {2, 3, 2}, {2, 3, 2}, {2, 3, 2}};
  EXPECT_THROW(a.Validate(), DimensionError);
  a = TinyPlainArch();
  a.fc = {4, 3};
  EXPECT_THROW(a.Validate(), InvalidArgumentError);
  EXPECT_THROW(ArchPreset("nope", 3), InvalidArgumentError);
}

TEST(ParamIndex, PartitionsCoverEveryIndexOnce) {
  const DetectorModel m = BuildModel(ArchPreset("resnet-mini", 3), 2);
  const ParamIndexMap& idx = m.index_map();
  const auto ex = idx.ExtractorIndices();
  const auto cl = idx.ClassifierIndices();
  EXPECT_EQ(ex.size() + cl.size(), m.num_params());
  for (size_t k : ex) EXPECT_TRUE(IsExtractorKind(idx.KindAt(k)));
  for (size_t k : cl) EXPECT_FALSE(IsExtractorKind(idx.KindAt(k)));
  for (size_t k : idx.BnAffineIndices()) EXPECT_TRUE(IsBnAffineKind(idx.KindAt(k)));
  EXPECT_THROW(idx.KindAt(m.num_params()), DimensionError);
}

TEST(Model, InitializationFollowsContract) {
  const ArchConfig a = ArchPreset("cloudscout-mini", 3);
  const DetectorModel m = BuildModel(a, 9);
  EXPECT_EQ(m.mode(), StatsMode::kTrainStats);
  EXPECT_TRUE(m == BuildModel(a, 9));
  EXPECT_FALSE(m == BuildModel(a, 10));
  DetectorModel copy = m;
  for (BnHandle h : BnLayers(copy)) {
    EXPECT_DOUBLE_EQ(h.momentum(), a.bn_momentum);
    for (float g : h.gamma()) EXPECT_EQ(g, 1.0f);
    for (float b : h.beta()) EXPECT_EQ(b, 0.0f);
    for (float v : h.running_mean()) EXPECT_EQ(v, 0.0f);
    for (float v : h.running_var()) EXPECT_EQ(v, 1.0f);
  }
  const ParamIndexMap& idx = m.index_map();
  for (const ParamRecord& r : idx.records()) {
    if (r.kind != ParamKind::kConvWeight && r.kind != ParamKind::kFcWeight) continue;
    float lo = 0, hi = 0;
    for (size_t i = 0; i < r.length; ++i) {
      lo = std::min(lo, m.params()[r.offset + i]);
      hi = std::max(hi, m.params()[r.offset + i]);
    }
    EXPECT_LT(lo, 0.0f);
    EXPECT_GT(hi, 0.0f);
  }
}

TEST(Model, ProbabilitiesSumToOne) {
  DetectorModel m = BuildModel(ArchPreset("resnet-mini", 3), 1);
  const LabeledDataset ds = RandomDataset(5, m.arch(), 1);
  for (StatsMode mode : {StatsMode::kTrainStats, StatsMode::kEvalStats}) {
    for (const ClassProbs& p : Forward(m, ds.Cubes(), mode)) {
      EXPECT_NEAR(p.p0 + p.p1, 1.0, 1e-12);
      EXPECT_GE(p.p0, 0.0);
    }
  }
}

TEST(Model, EvalStatsIsPerItem) {
  const DetectorModel m = BuildModel(TinyPlainArch(), 1);
  const std::vector<DataCube> cubes = RandomDataset(4, m.arch(), 2).Cubes();
  const std::vector<ClassProbs> all = Forward(m, cubes, StatsMode::kEvalStats);
  for (size_t i = 0; i < cubes.size(); ++i) {
    const ClassProbs one = Forward(m, std::span(&cubes[i], 1), StatsMode::kEvalStats)[0];
    EXPECT_EQ(one.p1, all[i].p1);
  }
  const std::vector<ClassProbs> train = Forward(m, cubes, StatsMode::kTrainStats);
  const ClassProbs solo = Forward(m, std::span(&cubes[0], 2), StatsMode::kTrainStats)[0];
  EXPECT_NE(solo.p1, train[0].p1);
}

TEST(Model, RejectsWrongGeometry) {
  const DetectorModel m = BuildModel(TinyPlainArch(), 1);
  const DataCube wrong = RandomCube(8, 8, 2, 1);
  EXPECT_THROW(Forward(m, std::span(&wrong, 1)), DimensionError);
}

TEST(Model, FlattenUnflattenRoundTrip) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  std::vector<float> v = FlattenParams(m);
  v[3] = 42.0f;
  UnflattenParams(m, v);
  EXPECT_EQ(m.params()[3], 42.0f);
  v.pop_back();
  EXPECT_THROW(UnflattenParams(m, v), DimensionError);
}

TEST(Model, RunningStatsBlendWithOwnMomentum) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  m.mutable_bn_states()[0].momentum = 0.25;
  const std::vector<DataCube> cubes = RandomDataset(3, m.arch(), 5).Cubes();
  const ForwardPass pass(m, cubes, StatsMode::kTrainStats);
  const BatchMoments bm = pass.batch_moments()[0];
  const BnState before = m.bn_states()[0];
  UpdateRunningStats(m, pass.batch_moments());
  const BnState& after = m.bn_states()[0];
  for (int c = 0; c < before.channels; ++c) {
    EXPECT_FLOAT_EQ(after.running_mean[c],
                    static_cast<float>(0.75 * before.running_mean[c] + 0.25 * bm.mean[c]));
    EXPECT_FLOAT_EQ(after.running_var[c],
                    static_cast<float>(0.75 * before.running_var[c] + 0.25 * bm.var[c]));
  }
}

TEST(Model, BatchMomentsOfFirstLayerMatchDirectComputation) {
  // The first BN sees the raw conv output; recompute it by hand for one
  // channel of a 1x1 conv net.
  ArchConfig a = TinyPlainArch();
  a.conv_blocks = {{1, 1, 1}};
  a.fc = {2};
  a.Validate();
  DetectorModel m = BuildModel(a, 3);
  const std::vector<DataCube> cubes = RandomDataset(2, a, 4).Cubes();
  const ForwardPass pass(m, cubes, StatsMode::kTrainStats);
  const double w = m.params()[0], b = m.params()[1];
  double s = 0, s2 = 0;
  for (const DataCube& c : cubes) {
    for (float x : c.pixels()) {
      const double y = w * x + b;
      s += y;
      s2 += y * y;
    }
  }
  const double n = 2.0 * 64.0;
  EXPECT_NEAR(pass.batch_moments()[0].mean[0], s / n, 1e-12);
  EXPECT_NEAR(pass.batch_moments()[0].var[0], s2 / n - (s / n) * (s / n), 1e-12);
}

TEST(Checkpoint, RoundTripIsBitExactAndStable) {
  TempDir dir("ckpt");
  DetectorModel m = BuildModel(ArchPreset("resnet-mini", 3), 4);
  m.set_mode(StatsMode::kEvalStats);
  m.mutable_bn_states()[1].running_mean[0] = 0.125f;
  m.mutable_bn_states()[2].momentum = 0.0625;
  SaveCheckpoint(m, dir / "a", "{\"k\": 1}");
  const DetectorModel back = LoadCheckpoint(dir / "a");
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.bn_states()[2].momentum, 0.0625);
  SaveCheckpoint(back, dir / "b", "{\"k\": 1}");
  EXPECT_TRUE(testing::SameTree(dir / "a", dir / "b"));
  EXPECT_EQ(LoadCheckpointProvenance(dir / "a"), "{\"k\":1}");
}

TEST(Checkpoint, CorruptedParamsRejected) {
  TempDir dir("ckbad");
  SaveCheckpoint(BuildModel(TinyPlainArch(), 1), dir.path());
  {
    std::fstream f(dir / "params.f32", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    f.put('\x7f');
  }
  EXPECT_THROW(LoadCheckpoint(dir.path()), FormatError);
  SaveCheckpoint(BuildModel(TinyPlainArch(), 1), dir / "other");
  std::filesystem::remove(dir / "other" / "bn_state.f32");
  EXPECT_THROW(LoadCheckpoint(dir / "other"), IoError);
}

TEST(Checkpoint, ArchJsonRoundTrip) {
  for (const std::string& name : ArchPresetNames()) {
    const ArchConfig a = ArchPreset(name, 4);
    EXPECT_EQ(ArchFromJson(ArchToJson(a)), a) << name;
  }
  EXPECT_THROW(ArchFromJson("{}"), FormatError);
}

}  // namespace
}  // namespace cloudadapt

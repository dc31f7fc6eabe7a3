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

#include <bit>
#include <cmath>
#include <cstring>

#include "cloudadapt/common/error.h"
#include "cloudadapt/data/synthetic.h"
#include "cloudadapt/train/loss.h"
#include "cloudadapt/train/pretrain.h"
#include "oracles.h"

namespace cloudadapt {
namespace {

using testing::RandomDataset;
using testing::TinyPlainArch;

bool BitsEqualAt(const DetectorModel& a, const DetectorModel& b, const std::vector<size_t>& idx) {
  for (size_t k : idx) {
    if (std::bit_cast<uint32_t>(a.params()[k]) != std::bit_cast<uint32_t>(b.params()[k])) return false;
  }
  return true;
}

TrainConfig Small(int epochs, int batch) {
  TrainConfig c;
  c.learning_rate = 0.05;
  c.epochs = epochs;
  c.batch_size = batch;
  c.seed = 3;
  return c;
}

TEST(Loss, ClampedNegativeLog) {
  EXPECT_NEAR(BceLoss(ClassProbs{0.25, 0.75}, 1), -std::log(0.75), 1e-15);
  EXPECT_NEAR(BceLoss(ClassProbs{1.0, 0.0}, 1), -std::log(1e-7), 1e-12);
  const ClassProbs p[] = {{0.5, 0.5}, {0.9, 0.1}};
  const int l[] = {0, 0};
  EXPECT_NEAR(BceLoss(p, l), 0.5 * (std::log(2.0) - std::log(0.9)), 1e-15);
  EXPECT_THROW(BceLoss(std::span<const ClassProbs>(), std::span<const int>()), DimensionError);
}

TEST(TrainConfig, ValidationAndSchedule) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.learning_rate = 0.0;
  EXPECT_NO_THROW(c.Validate());
  c.learning_rate = -1.0;
  EXPECT_THROW(c.Validate(), InvalidArgumentError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), InvalidArgumentError);
  c = TrainConfig{};
  c.schedule = LrScheduleKind::kStepDecay;
  c.learning_rate = 0.1;
  c.decay_factor = 0.5;
  c.decay_period = 3;
  EXPECT_DOUBLE_EQ(c.LearningRateAt(2), 0.1);
  EXPECT_DOUBLE_EQ(c.LearningRateAt(3), 0.05);
  EXPECT_DOUBLE_EQ(c.LearningRateAt(7), 0.025);
  EXPECT_EQ(ParseLrSchedule(LrScheduleName(LrScheduleKind::kStepDecay)), LrScheduleKind::kStepDecay);
}

TEST(Pretrain, StageOneHoldsClassifierAtInit) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  const DetectorModel init = m;
  const TrainReport r = TrainExtractor(m, RandomDataset(10, m.arch(), 2), Small(2, 4));
  EXPECT_EQ(r.steps, 6u);  // 2 epochs of ceil(10 / 4) batches
  EXPECT_EQ(r.epoch_losses.size(), 2u);
  EXPECT_TRUE(BitsEqualAt(m, init, m.index_map().ClassifierIndices()));
  EXPECT_FALSE(BitsEqualAt(m, init, m.index_map().ExtractorIndices()));
  EXPECT_FALSE(m.bn_states() == init.bn_states());
}

TEST(Pretrain, StageTwoFreezesExtractorAndRunningStats) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  TrainExtractor(m, RandomDataset(10, m.arch(), 2), Small(1, 4));
  const DetectorModel mid = m;
  TrainClassifier(m, RandomDataset(10, m.arch(), 3), Small(2, 4));
  EXPECT_TRUE(BitsEqualAt(m, mid, m.index_map().ExtractorIndices()));
  EXPECT_FALSE(BitsEqualAt(m, mid, m.index_map().ClassifierIndices()));
  EXPECT_EQ(m.bn_states(), mid.bn_states());
  EXPECT_EQ(m.mode(), StatsMode::kEvalStats);
}

TEST(Pretrain, ZeroLearningRateKeepsParameters) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  const DetectorModel init = m;
  TrainConfig c = Small(2, 4);
  c.learning_rate = 0.0;
  TrainExtractor(m, RandomDataset(8, m.arch(), 2), c);
  TrainClassifier(m, RandomDataset(8, m.arch(), 2), c);
  EXPECT_EQ(std::memcmp(m.params().data(), init.params().data(), m.num_params() * 4), 0);
}

TEST(Pretrain, SameSeedSameModel) {
  auto run = [] {
    DetectorModel m = BuildModel(TinyPlainArch(), 1);
    TrainExtractor(m, RandomDataset(12, m.arch(), 2), Small(2, 5));
    TrainClassifier(m, RandomDataset(12, m.arch(), 3), Small(2, 5));
    return m;
  };
  EXPECT_TRUE(run() == run());
}

TEST(Pretrain, LearnsSyntheticSourceDomain) {
  const DomainPair p = SynthDomainPair(96, {16, 16, 3}, ShiftPreset("none", 3, 1), 4);
  ArchConfig a = ArchPreset("cloudscout-mini", 3);
  a.input_height = a.input_width = 16;
  a.conv_blocks.pop_back();
  a.fc = {2};
  a.global_pool = true;
  a.Validate();
  DetectorModel m = BuildModel(a, 5);
  TrainConfig c = Small(8, 16);
  c.learning_rate = 0.02;
  const TrainReport r = TrainExtractor(m, p.source.low.train, c);
  EXPECT_LT(r.epoch_losses.back(), r.epoch_losses.front());
  const TrainReport r2 = TrainClassifier(m, p.source.high.train, c);
  EXPECT_LT(r2.epoch_losses.back(), r2.epoch_losses.front());
}

TEST(Pretrain, RejectsEmptyData) {
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  EXPECT_THROW(TrainExtractor(m, LabeledDataset{}, Small(1, 1)), InvalidArgumentError);
}

TEST(Pretrain, GatherCubesFollowsOrder) {
  const LabeledDataset ds = RandomDataset(5, TinyPlainArch(), 2);
  const size_t order[] = {4, 0, 4};
  const std::vector<DataCube> c = GatherCubes(ds, order);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], ds.items[4].cube);
  EXPECT_EQ(c[1], ds.items[0].cube);
}

}  // namespace
}  // namespace cloudadapt

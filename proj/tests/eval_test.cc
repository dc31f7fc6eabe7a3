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

#include <algorithm>

#include "cloudadapt/common/error.h"
#include "cloudadapt/eval/metrics.h"
#include "json.hpp"
#include "oracles.h"

namespace cloudadapt {
namespace {

using testing::RandomDataset;
using testing::TinyPlainArch;

TEST(Metrics, MatchBruteForceOnEveryLengthFourCase) {
  for (int pm = 0; pm < 16; ++pm) {
    for (int lm = 0; lm < 16; ++lm) {
      std::vector<int> pred(4), label(4);
      for (int i = 0; i < 4; ++i) {
        pred[i] = (pm >> i) & 1;
        label[i] = (lm >> i) & 1;
      }
      ASSERT_EQ(Accuracy(pred, label), testing::CountAccuracy(pred, label));
      ASSERT_EQ(FalsePositiveRate(pred, label), testing::CountFalsePositive(pred, label));
    }
  }
}

TEST(Metrics, FalsePositivesNormalizedByAllItems) {
  const std::vector<int> pred = {1, 1, 0, 0}, label = {0, 1, 1, 1};
  EXPECT_EQ(FalsePositiveRate(pred, label), 25.0);
  EXPECT_EQ(Accuracy(pred, label), 25.0);
}

TEST(Metrics, RejectsBadInput) {
  const std::vector<int> a = {0, 1}, b = {0};
  EXPECT_THROW(Accuracy(a, b), DimensionError);
  EXPECT_THROW(Accuracy(std::vector<int>{}, std::vector<int>{}), DimensionError);
  EXPECT_THROW(FalsePositiveRate(std::vector<int>{2}, std::vector<int>{0}), InvalidArgumentError);
}

TEST(Evaluate, AgreesWithPredictionsAndCountsNegatives) {
  DetectorModel m = BuildModel(TinyPlainArch(), 3);
  m.set_mode(StatsMode::kEvalStats);
  const LabeledDataset ds = RandomDataset(37, m.arch(), 2);
  const MetricsReport r = Evaluate(m, ds);
  const std::vector<int> pred = PredictDataset(m, ds);
  EXPECT_EQ(r.acc_percent, testing::CountAccuracy(pred, ds.Labels()));
  EXPECT_EQ(r.fp_percent, testing::CountFalsePositive(pred, ds.Labels()));
  size_t neg = 0;
  for (int l : ds.Labels()) neg += l == 0;
  EXPECT_EQ(r.negatives, neg);
  EXPECT_EQ(r.n, 37u);
  EXPECT_EQ(r.stats_mode, "EVAL_STATS");
  const auto j = nlohmann::json::parse(r.ToJson());
  EXPECT_EQ(j.at("n").get<size_t>(), 37u);
}

TEST(Evaluate, TrainStatsUsesConsecutiveBatches) {
  const DetectorModel m = BuildModel(TinyPlainArch(), 3);
  const LabeledDataset ds = RandomDataset(10, m.arch(), 2);
  EvalOptions o;
  o.mode = StatsMode::kTrainStats;
  o.batch_size = 4;
  const std::vector<int> pred = PredictDataset(m, ds, o);
  const std::vector<DataCube> cubes = ds.Cubes();
  std::vector<int> expect;
  for (size_t s = 0; s < cubes.size(); s += 4) {
    const size_t n = std::min<size_t>(4, cubes.size() - s);
    for (const ClassProbs& p : Forward(m, std::span(cubes).subspan(s, n), StatsMode::kTrainStats)) {
      expect.push_back(ArgmaxClass(p));
    }
  }
  EXPECT_EQ(pred, expect);
}

TEST(Gap, DatasetAgainstItselfIsZero) {
  DetectorModel m = BuildModel(TinyPlainArch(), 3);
  m.set_mode(StatsMode::kEvalStats);
  const LabeledDataset ds = RandomDataset(20, m.arch(), 5);
  const GapReport g = ComputeGapReport(m, ds, ds);
  EXPECT_EQ(g.gap_acc, 0.0);
  EXPECT_EQ(g.gap_fp, 0.0);
}

TEST(Gap, IsAbsoluteDifference) {
  MetricsReport s, t;
  s.acc_percent = 90.0;
  s.fp_percent = 2.0;
  t.acc_percent = 95.5;
  t.fp_percent = 1.0;
  const GapReport g = MakeGapReport(s, t);
  EXPECT_EQ(g.gap_acc, 5.5);
  EXPECT_EQ(g.gap_fp, 1.0);
}

}  // namespace
}  // namespace cloudadapt

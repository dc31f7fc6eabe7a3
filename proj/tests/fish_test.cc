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
#include "cloudadapt/common/fnv1a.h"
#include "cloudadapt/common/random.h"
#include "cloudadapt/fish/delta.h"
#include "cloudadapt/fish/finetune.h"
#include "cloudadapt/fish/fisher.h"
#include "cloudadapt/fish/mask.h"
#include "oracles.h"

namespace cloudadapt {
namespace {

using testing::CeilRatio;
using testing::RandomDataset;
using testing::RelErr;
using testing::TinyPlainArch;

DetectorModel DeployedTiny(uint64_t seed) {
  DetectorModel m = BuildModel(TinyPlainArch(), seed);
  testing::MoveToGenericPoint(m, seed + 50);
  m.set_mode(StatsMode::kEvalStats);
  return m;
}

TEST(Fisher, MatchesFiniteDifferenceOracle) {
  const DetectorModel m = DeployedTiny(3);
  ASSERT_LE(m.num_params(), 200u);
  const LabeledDataset ds = RandomDataset(4, m.arch(), 21);
  const FisherScores f = ComputeFisherScores(m, ds);
  const std::vector<double> oracle = testing::FisherOracle(m, ds, 1e-5);
  EXPECT_EQ(f.n_samples, 4u);
  ASSERT_EQ(f.values.size(), oracle.size());
  for (size_t k = 0; k < oracle.size(); ++k) {
    EXPECT_LT(RelErr(f.values[k], oracle[k]), 1e-3)
        << "param " << k << " analytic " << f.values[k] << " oracle " << oracle[k];
  }
}

TEST(Fisher, RequiresEvalStatsAndData) {
  DetectorModel m = DeployedTiny(3);
  EXPECT_THROW(ComputeFisherScores(m, LabeledDataset{}), InvalidArgumentError);
  m.set_mode(StatsMode::kTrainStats);
  EXPECT_THROW(ComputeFisherScores(m, RandomDataset(2, m.arch(), 1)), InvalidArgumentError);
}

TEST(Fisher, ScoresAreNonnegativeAndLeaveModelUntouched) {
  const DetectorModel m = DeployedTiny(4);
  const DetectorModel before = m;
  const FisherScores f = ComputeFisherScores(m, RandomDataset(6, m.arch(), 2));
  EXPECT_NO_THROW(f.Validate());
  for (double v : f.values) EXPECT_GE(v, 0.0);
  EXPECT_TRUE(m == before);
}

TEST(MaskCardinality, EqualsIntegerCeilForRandomRationalSparsity) {
  Rng rng(17);
  for (int trial = 0; trial < 20000; ++trial) {
    const uint64_t den = 1 + rng.Below(1000);
    const uint64_t num = 1 + rng.Below(den);
    const uint64_t p = 1 + rng.Below(trial % 2 ? 30'000'000 : 1000);
    const double l = static_cast<double>(num) / static_cast<double>(den);
    ASSERT_EQ(MaskCardinality(l, p), CeilRatio(num, p, den))
        << num << "/" << den << " of " << p;
  }
}

TEST(MaskCardinality, ReferenceValues) {
  EXPECT_EQ(MaskCardinality(0.07, 100), 7u);
  EXPECT_EQ(MaskCardinality(1.0, 41346), 41346u);
  EXPECT_EQ(MaskCardinality(0.25, 1292546), 323137u);
  EXPECT_EQ(MaskCardinality(0.01, 23512130), 235122u);
  EXPECT_EQ(MaskCardinality(1e-9, 10), 1u);
  EXPECT_THROW(MaskCardinality(0.0, 10), InvalidArgumentError);
  EXPECT_THROW(MaskCardinality(1.5, 10), InvalidArgumentError);
  EXPECT_THROW(MaskCardinality(std::nan(""), 10), InvalidArgumentError);
}

FisherScores Scores(std::vector<double> v) {
  FisherScores f;
  f.values = std::move(v);
  f.n_samples = 1;
  return f;
}

TEST(SelectMask, TopScoresWithLowerIndexWinningTies) {
  const SparseMask m = SelectMask(Scores({1, 5, 3, 5, 0, 3}), 0.5);
  EXPECT_EQ(m.indices, (std::vector<size_t>{1, 2, 3}));
  EXPECT_EQ(m.total_params, 6u);
  EXPECT_EQ(SelectMask(Scores({2, 2, 2, 2}), 0.5).indices, (std::vector<size_t>{0, 1}));
}

TEST(SelectMask, InvariantUnderStrictlyIncreasingTransforms) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t p = 1 + rng.Below(300);
    std::vector<double> s(p);
    // Small integer range so ties are common.
    for (double& v : s) v = static_cast<double>(rng.Below(40));
    const double l = (1.0 + rng.Below(100)) / 100.0;
    const SparseMask base = SelectMask(Scores(s), l);
    ASSERT_EQ(base.indices.size(), MaskCardinality(l, p));
    std::vector<double> affine = s, root = s, expo = s;
    for (size_t i = 0; i < p; ++i) {
      affine[i] = 3.0 * s[i] + 7.0;
      root[i] = std::sqrt(s[i]);
      expo[i] = std::exp(s[i] / 4.0);
    }
    EXPECT_EQ(SelectMask(Scores(affine), l).indices, base.indices);
    EXPECT_EQ(SelectMask(Scores(root), l).indices, base.indices);
    EXPECT_EQ(SelectMask(Scores(expo), l).indices, base.indices);
  }
}

TEST(SelectMask, KeepsTheLargestScores) {
  Rng rng(8);
  std::vector<double> s(500);
  for (double& v : s) v = rng.Uniform();
  const SparseMask m = SelectMask(Scores(s), 0.1);
  double min_in = 1e9, max_out = -1;
  std::vector<bool> in(s.size(), false);
  for (size_t k : m.indices) in[k] = true;
  for (size_t k = 0; k < s.size(); ++k) {
    if (in[k]) min_in = std::min(min_in, s[k]);
    else max_out = std::max(max_out, s[k]);
  }
  EXPECT_GT(min_in, max_out);
}

TrainConfig QuickConfig() {
  TrainConfig c;
  c.learning_rate = 0.05;
  c.epochs = 3;
  c.batch_size = 4;
  c.seed = 2;
  return c;
}

TEST(MaskedFinetune, ComplementKeepsExactBits) {
  DetectorModel m = DeployedTiny(6);
  const DetectorModel source = m;
  const LabeledDataset ds = RandomDataset(12, m.arch(), 30);
  const SparseMask mask = SelectMask(ComputeFisherScores(m, ds), 0.2);
  MaskedFinetune(m, mask, ds, QuickConfig());
  std::vector<bool> in(m.num_params(), false);
  for (size_t k : mask.indices) in[k] = true;
  size_t changed = 0;
  for (size_t k = 0; k < m.num_params(); ++k) {
    const uint32_t a = std::bit_cast<uint32_t>(m.params()[k]);
    const uint32_t b = std::bit_cast<uint32_t>(source.params()[k]);
    if (!in[k]) {
      ASSERT_EQ(a, b) << "index " << k;
    } else {
      changed += a != b;
    }
  }
  EXPECT_GT(changed, 0u);
  EXPECT_EQ(m.bn_states(), source.bn_states());
}

TEST(MaskedFinetune, FullMaskEqualsUnrestrictedFinetune) {
  DetectorModel a = DeployedTiny(7);
  DetectorModel b = a;
  const LabeledDataset ds = RandomDataset(10, a.arch(), 31);
  const TrainReport ra = MaskedFinetune(a, FullMask(a.num_params()), ds, QuickConfig());
  const TrainReport rb = FineTune(b, ds, QuickConfig());
  EXPECT_TRUE(a == b);
  EXPECT_EQ(ra.epoch_losses, rb.epoch_losses);
}

TEST(MaskedFinetune, RejectsMismatchedMask) {
  DetectorModel m = DeployedTiny(7);
  EXPECT_THROW(MaskedFinetune(m, FullMask(m.num_params() + 1), RandomDataset(2, m.arch(), 1),
                              QuickConfig()),
               MaskViolationError);
}

TEST(SparseDelta, ApplyAfterExtractReproducesAdapted) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t p = 1 + rng.Below(2000);
    std::vector<float> source(p);
    for (float& v : source) v = static_cast<float>(rng.Normal());
    FisherScores f;
    for (size_t i = 0; i < p; ++i) f.values.push_back(rng.Uniform());
    const SparseMask mask = SelectMask(f, (1.0 + rng.Below(100)) / 100.0);
    std::vector<float> adapted = source;
    for (size_t k : mask.indices) adapted[k] = static_cast<float>(rng.Normal());
    const SparseDelta d = ExtractDelta(source, adapted, mask);
    EXPECT_EQ(d.model_fingerprint, FingerprintFloats(source));
    EXPECT_EQ(d.total_params, p);
    const std::vector<float> back = ApplyDelta(source, d);
    ASSERT_EQ(back.size(), p);
    EXPECT_EQ(std::memcmp(back.data(), adapted.data(), p * sizeof(float)), 0);
  }
}

TEST(SparseDelta, ExtractRejectsChangesOutsideMask) {
  std::vector<float> source(10, 1.0f), adapted = source;
  adapted[9] = 2.0f;
  SparseMask mask{{0, 1}, 0.2, 10};
  EXPECT_THROW(ExtractDelta(source, adapted, mask), MaskViolationError);
  adapted[9] = -0.0f;
  source[9] = 0.0f;
  EXPECT_THROW(ExtractDelta(source, adapted, mask), MaskViolationError);
}

TEST(SparseDelta, ApplyRejectsWrongBaseAndBadIndices) {
  std::vector<float> source(10, 1.0f), adapted = source;
  adapted[3] = 4.0f;
  const SparseDelta d = ExtractDelta(source, adapted, SparseMask{{3}, 0.1, 10});
  std::vector<float> other = source;
  other[0] = 1.5f;
  EXPECT_THROW(ApplyDelta(other, d), FingerprintMismatchError);
  EXPECT_THROW(ApplyDelta(std::vector<float>(11, 1.0f), d), DimensionError);
  SparseDelta bad = d;
  bad.indices = {12};
  EXPECT_THROW(ApplyDelta(source, bad), FormatError);
}

}  // namespace
}  // namespace cloudadapt

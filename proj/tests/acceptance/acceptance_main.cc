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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and time limits are pinned below.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <functional>
#include <string>
#include <vector>

#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/common/error.h"
#include "cloudadapt/common/fnv1a.h"
#include "cloudadapt/common/random.h"
#include "cloudadapt/detector/arch.h"
#include "cloudadapt/detector/checkpoint.h"
#include "cloudadapt/eval/metrics.h"
#include "cloudadapt/experiment/mission.h"
#include "cloudadapt/fish/delta.h"
#include "cloudadapt/fish/finetune.h"
#include "cloudadapt/fish/fisher.h"
#include "cloudadapt/fish/mask.h"
#include "cloudadapt/train/loss.h"
#include "cloudadapt/tta/driver.h"
#include "cloudadapt/tta/dua.h"
#include "cloudadapt/tta/tent.h"
#include "cloudadapt/uplink/budget.h"
#include "cloudadapt/uplink/fp16.h"
#include "cloudadapt/uplink/udlt.h"
#include "oracles.h"

#ifndef CLOUDADAPT_TEST_DATA_DIR
#error "CLOUDADAPT_TEST_DATA_DIR must point at tests/data"
#endif

namespace cloudadapt {
namespace {

using namespace cloudadapt::testing;

constexpr double kFisherTol = 1e-3;
constexpr double kGradTol = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr double kDuaTol = 1e-12;
constexpr uint64_t kCloudScoutParams = 1'292'546;
constexpr uint64_t kResNet50Params = 23'512'130;
constexpr double kResNet50FootprintMb = 94.37;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void Note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

bool SameBits(std::span<const float> a, std::span<const float> b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

// 1. ACC/FP against brute-force counting on every length-4 case.
Outcome MetricOracle() {
  Outcome o;
  int cases = 0, exact = 0;
  for (int pm = 0; pm < 16; ++pm) {
    for (int lm = 0; lm < 16; ++lm) {
      std::vector<int> p(4), l(4);
      for (int i = 0; i < 4; ++i) {
        p[i] = (pm >> i) & 1;
        l[i] = (lm >> i) & 1;
      }
      ++cases;
      exact += Accuracy(p, l) == CountAccuracy(p, l) &&
               FalsePositiveRate(p, l) == CountFalsePositive(p, l);
    }
  }
  o.Require(exact == cases, "exact match");
  o.Note(std::to_string(exact) + "/" + std::to_string(cases) + " cases exact");
  return o;
}

DetectorModel DeployedTiny(uint64_t seed) {
  DetectorModel m = BuildModel(TinyPlainArch(), seed);
  MoveToGenericPoint(m, seed + 50);
  m.set_mode(StatsMode::kEvalStats);
  return m;
}

// 2. Fisher scores against finite differences.
Outcome FisherCheck() {
  Outcome o;
  const DetectorModel m = DeployedTiny(3);
  const LabeledDataset ds = RandomDataset(4, m.arch(), 21);
  const FisherScores f = ComputeFisherScores(m, ds);
  const std::vector<double> oracle = FisherOracle(m, ds, kGradStep);
  double worst = 0.0;
  for (size_t k = 0; k < oracle.size(); ++k) worst = std::max(worst, RelErr(f.values[k], oracle[k]));
  o.Require(m.num_params() <= 200, "model has <= 200 parameters");
  o.Require(worst < kFisherTol, "rel err < 1e-3");
  o.Note(std::to_string(m.num_params()) + " params, 4 samples, max rel err " + Fmt("%.2e", worst));
  return o;
}

// 3. BCE (all parameters) and Tent entropy (gamma, beta) gradients.
Outcome GradientChecks() {
  Outcome o;
  double worst_bce = 0.0, worst_tent = 0.0;
  size_t checked = 0;
  for (const ArchConfig& arch : {TinyPlainArch(), TinyResidualArch()}) {
    for (StatsMode mode : {StatsMode::kTrainStats, StatsMode::kEvalStats}) {
      DetectorModel m = BuildModel(arch, 5);
      MoveToGenericPoint(m, 55);
      const LabeledDataset ds = RandomDataset(3, arch, 105);
      const std::vector<DataCube> cubes = ds.Cubes();
      const std::vector<int> labels = ds.Labels();
      const ForwardPass pass(m, cubes, mode);
      std::vector<Logits> d;
      for (size_t i = 0; i < ds.size(); ++i) {
        Logits g = BceLogitGradient(pass.logits()[i], labels[i]);
        for (double& v : g) v /= static_cast<double>(ds.size());
        d.push_back(g);
      }
      const std::vector<double> g = pass.Backward(d, ParamScope::All());
      for (size_t k = 0; k < g.size(); ++k) {
        const double fd = CentralDifference(m, k, kGradStep, [&](const DetectorModel& mm) {
          return BatchBce(mm, cubes, labels, mode);
        });
        worst_bce = std::max(worst_bce, RelErr(g[k], fd));
        ++checked;
      }
    }
    DetectorModel m = BuildModel(arch, 11);
    MoveToGenericPoint(m, 61);
    const std::vector<size_t> bn = m.index_map().BnAffineIndices();
    const std::vector<DataCube> cubes = RandomDataset(4, arch, 18).Cubes();
    const EntropyGradient eg = TentGradient(m, cubes);
    for (size_t k : bn) {
      const double fd = CentralDifference(m, k, kGradStep, [&](const DetectorModel& mm) {
        return BatchEntropy(mm, cubes);
      });
      worst_tent = std::max(worst_tent, RelErr(eg.grad[k], fd));
    }
  }
  o.Require(worst_bce < kGradTol, "BCE rel err < 1e-4");
  o.Require(worst_tent < kGradTol, "Tent rel err < 1e-4");
  o.Note(std::to_string(checked) + " BCE partials, max rel err " + Fmt("%.2e", worst_bce) +
         "; Tent gamma/beta max rel err " + Fmt("%.2e", worst_tent));
  return o;
}

FisherScores ScoresOf(std::vector<double> v) {
  FisherScores f;
  f.values = std::move(v);
  f.n_samples = 1;
  return f;
}

// 4. Mask cardinality, complement exactness, rank invariance, apply/extract.
Outcome FishLaws() {
  Outcome o;
  Rng rng(41);
  int card_bad = 0;
  for (int t = 0; t < 20000; ++t) {
    const uint64_t den = 1 + rng.Below(1000);
    const uint64_t num = 1 + rng.Below(den);
    const uint64_t p = 1 + rng.Below(t % 2 ? 30'000'000 : 1000);
    card_bad += MaskCardinality(static_cast<double>(num) / static_cast<double>(den), p) !=
                CeilRatio(num, p, den);
  }
  o.Require(card_bad == 0, "cardinality = ceil(l P)");

  DetectorModel m = DeployedTiny(6);
  const DetectorModel source = m;
  const LabeledDataset ds = RandomDataset(12, m.arch(), 30);
  const SparseMask mask = SelectMask(ComputeFisherScores(m, ds), 0.2);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  MaskedFinetune(m, mask, ds, cfg);
  std::vector<bool> in(m.num_params(), false);
  for (size_t k : mask.indices) in[k] = true;
  int complement_bad = 0;
  for (size_t k = 0; k < m.num_params(); ++k) {
    if (!in[k]) {
      complement_bad += std::bit_cast<uint32_t>(m.params()[k]) !=
                        std::bit_cast<uint32_t>(source.params()[k]);
    }
  }
  o.Require(complement_bad == 0, "complement bit-exact");
  const SparseDelta d = ExtractDelta(source.params(), m.params(), mask);
  o.Require(SameBits(ApplyDelta(source.params(), d), m.params()), "apply(extract) = adapted");

  int rank_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const size_t p = 1 + rng.Below(300);
    std::vector<double> s(p), a(p), r(p);
    for (size_t i = 0; i < p; ++i) {
      s[i] = static_cast<double>(rng.Below(40));
      a[i] = 3.0 * s[i] + 7.0;
      r[i] = std::sqrt(s[i]);
    }
    const double l = (1.0 + rng.Below(100)) / 100.0;
    const auto base = SelectMask(ScoresOf(s), l).indices;
    rank_bad += SelectMask(ScoresOf(a), l).indices != base;
    rank_bad += SelectMask(ScoresOf(r), l).indices != base;
  }
  o.Require(rank_bad == 0, "monotone rank invariance");

  int identity_bad = 0;
  for (int t = 0; t < 50; ++t) {
    const size_t p = 1 + rng.Below(2000);
    std::vector<float> src(p);
    for (float& v : src) v = static_cast<float>(rng.Normal());
    FisherScores f;
    for (size_t i = 0; i < p; ++i) f.values.push_back(rng.Uniform());
    const SparseMask mk = SelectMask(f, (1.0 + rng.Below(100)) / 100.0);
    std::vector<float> adapted = src;
    for (size_t k : mk.indices) adapted[k] = static_cast<float>(rng.Normal());
    identity_bad += !SameBits(ApplyDelta(src, ExtractDelta(src, adapted, mk)), adapted);
  }
  o.Require(identity_bad == 0, "apply(extract) identity on random vectors");
  o.Note("20000 cardinality draws, 400 rank checks, 51 apply/extract checks, " +
         std::to_string(mask.indices.size()) + "-entry masked fine-tune");
  return o;
}

// 5. DUA momentum closed form and untouched trainable vector.
Outcome DuaClosedForm() {
  Outcome o;
  DetectorModel m = BuildModel(TinyPlainArch(), 2);
  m.set_mode(StatsMode::kEvalStats);
  const DetectorModel before = m;
  const DUAConfig cfg;
  DuaAdapter dua(cfg);
  const AdaptReport r = RunTta(m, RandomDataset(100, m.arch(), 5).Cubes(), 1, dua);
  double worst = 0.0;
  for (int k = 1; k <= 100; ++k) {
    worst = std::max(worst, std::abs(r.momentum_trace[k - 1] -
                                     DuaMomentumClosedForm(cfg.omega, cfg.delta_floor, cfg.m0, k)));
  }
  o.Require(r.momentum_trace.size() == 100, "100 steps");
  o.Require(worst <= kDuaTol, "|m_k - closed form| <= 1e-12");
  o.Require(SameBits(m.params(), before.params()), "trainable vector bit-identical");
  o.Note("100 steps, max |err| " + Fmt("%.1e", worst));
  return o;
}

// 6. Driver accounting.
Outcome DriverAccounting() {
  Outcome o;
  Rng rng(61);
  DetectorModel m = BuildModel(TinyPlainArch(), 1);
  const std::vector<DataCube> pool = RandomDataset(300, m.arch(), 4).Cubes();
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const size_t n_t = rng.Below(301);
    const size_t n_b = 1 + rng.Below(64);
    CountingAdapter adapter;
    const AdaptReport r = RunTta(m, std::span(pool).first(n_t), n_b, adapter);
    bad += adapter.sizes.size() != n_t / n_b || r.batches_processed != n_t / n_b ||
           r.samples_dropped != n_t % n_b;
  }
  o.Require(bad == 0, "calls = floor(N/n), dropped = N mod n");
  o.Note("1000 random (N_t, n_B) pairs, " + std::to_string(bad) + " mismatches");
  return o;
}

// 7. UDLT v1 wire format.
Outcome WireFormat() {
  Outcome o;
  const std::filesystem::path data = CLOUDADAPT_TEST_DATA_DIR;
  std::vector<float> gsrc(10);
  for (size_t i = 0; i < 10; ++i) gsrc[i] = static_cast<float>(i) * 0.5f;
  const Bytes g32 = ReadFileBytes(data / "golden_fp32.udlt");
  const Bytes g16 = ReadFileBytes(data / "golden_fp16.udlt");
  const Bytes g0 = ReadFileBytes(data / "golden_empty.udlt");
  const SparseDelta d32 = DecodeDelta(g32);
  const SparseDelta d16 = DecodeDelta(g16);
  o.Require(d32.indices == std::vector<uint32_t>{1, 4, 9} &&
                d32.values == std::vector<float>{1.5f, -0.25f, 3.0e-5f} &&
                d32.model_fingerprint == FingerprintFloats(gsrc) && d32.total_params == 10,
            "golden fp32 fields");
  o.Require(d16.indices == std::vector<uint32_t>{0, 2, 3, 7} &&
                d16.values == std::vector<float>{1.5f, -0.25f, 65504.0f, HalfToFloat(0x2E66)},
            "golden fp16 fields");
  o.Require(EncodeDelta(d32, DeltaDtype::kFp32) == g32 &&
                EncodeDelta(d16, DeltaDtype::kFp16) == g16 && g0.size() == 32 &&
                DecodeDelta(g0).size() == 0,
            "golden re-encode");

  Rng rng(71);
  int rt_bad = 0, payload_bad = 0, idem_bad = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<float> src(1 + rng.Below(3000));
    for (float& v : src) v = static_cast<float>(rng.Normal());
    SparseDelta d;
    d.total_params = src.size();
    d.model_fingerprint = FingerprintFloats(src);
    for (uint32_t i = 0; i < src.size(); ++i) {
      if (rng.Below(5) == 0) {
        d.indices.push_back(i);
        d.values.push_back(std::bit_cast<float>(static_cast<uint32_t>(rng.NextU64()) & 0xBFFFFFFFu));
      }
    }
    const Bytes e32 = EncodeDelta(d, DeltaDtype::kFp32);
    rt_bad += !(DecodeDelta(e32) == d);
    const Bytes e16 = EncodeDelta(d, DeltaDtype::kFp16);
    const SparseDelta h = DecodeDelta(e16);
    idem_bad += h.values != RoundTripFp16(d.values) || EncodeDelta(h, DeltaDtype::kFp16) != e16;
    payload_bad += e32.size() != PayloadOracle(d.size(), 4) || e16.size() != PayloadOracle(d.size(), 2);
  }
  o.Require(rt_bad == 0, "fp32 round trip bit-exact");
  o.Require(idem_bad == 0, "fp16 quantization idempotent");
  o.Require(payload_bad == 0, "payload = 32 + K(4 + s)");

  int trunc_ok = 0;
  for (size_t n = 0; n < g32.size(); ++n) {
    try {
      DecodeDelta(std::span(g32).first(n));
    } catch (const FormatError&) {
      ++trunc_ok;
    }
  }
  o.Require(trunc_ok == static_cast<int>(g32.size()), "every truncation rejected");
  std::vector<float> other = gsrc;
  other[2] = 7.0f;
  bool fp_rejected = false;
  try {
    ApplyDelta(other, d32);
  } catch (const FingerprintMismatchError&) {
    fp_rejected = true;
  }
  o.Require(fp_rejected, "fingerprint mismatch rejected");
  o.Note("3 golden files, 200 random deltas, " + std::to_string(trunc_ok) + " truncations rejected");
  return o;
}

// 8. Accounting at the published parameter counts.
Outcome Bandwidth() {
  Outcome o;
  const uint64_t p_cs = AnalyticParamCount(ArchPreset("cloudscout", 3)).total();
  const uint64_t p_rn = AnalyticParamCount(ArchPreset("resnet50", 3)).total();
  o.Require(p_cs == kCloudScoutParams && p_rn == kResNet50Params, "preset totals");
  Rng rng(81);
  for (const auto& [p, num, den] : {std::tuple{kCloudScoutParams, 25u, 100u},
                                    std::tuple{kResNet50Params, 1u, 100u}}) {
    // A real delta of the right cardinality, encoded.
    FisherScores f;
    f.values.resize(p);
    for (double& v : f.values) v = rng.Uniform();
    const double l = static_cast<double>(num) / den;
    const SparseMask mask = SelectMask(f, l);
    const std::vector<float> src(p, 0.0f);
    std::vector<float> adapted = src;
    for (size_t k : mask.indices) adapted[k] = 1.0f;
    const SparseDelta d = ExtractDelta(src, adapted, mask);
    const uint64_t closed = PayloadOracle(CeilRatio(num, p, den), 4);
    const BudgetReport b = MakeBudgetReport(d.size(), p, DeltaDtype::kFp32, 5'000'000);
    o.Require(EncodeDelta(d, DeltaDtype::kFp32).size() == closed && b.payload_bytes == closed,
              "payload at P = " + std::to_string(p));
    o.Note("P=" + std::to_string(p) + " l=" + Fmt("%.2f", l) + " payload " +
           std::to_string(b.payload_bytes) + " B");
  }
  const double full_mb = MakeBudgetReport(0, p_rn, DeltaDtype::kFp32, 0).full_model_bytes / 1e6;
  const double rel = std::abs(full_mb - kResNet50FootprintMb) / kResNet50FootprintMb;
  o.Require(rel < 0.01, "ResNet-scale FP32 size within 1% of 94.37 MB");
  o.Note("ResNet-scale full " + Fmt("%.2f", full_mb) + " MB (" + Fmt("%.2f", 100 * rel) + "% off)");
  return o;
}

// 9 and 10 share the mission result.
struct MissionRun {
  MissionResult result;
  double cpu_seconds = 0.0;
};

MissionRun RunTimedMission() {
  const std::clock_t c0 = std::clock();
  MissionRun r{RunMission(MissionConfig{}), 0.0};
  r.cpu_seconds = static_cast<double>(std::clock() - c0) / CLOCKS_PER_SEC;
  return r;
}

Outcome SyntheticGap(const MissionRun& run) {
  Outcome o;
  const MissionResult& r = run.result;
  const double src = r.source_test.acc_percent;
  const double tgt = r.gap.target_test.acc_percent;
  o.Require(src >= 90.0, "(a) source ACC >= 90");
  o.Require(r.gap.gap_acc >= 15.0, "(b) gap >= 15");
  o.Require(std::abs(r.fish.acc_percent - r.fish_full.acc_percent) <= 2.0,
            "(c) |FISH(0.25) - FISH(1.0)| <= 2");
  o.Require(r.dua.acc_percent - tgt >= 5.0, "(d) DUA gain >= 5");
  o.Require(r.tent.acc_percent - tgt >= 5.0, "(d) Tent gain >= 5");
  o.Require(std::abs(r.tent_extra.acc_percent - r.tent.acc_percent) < 1.0,
            "(e) Tent epochs 1 vs 3 differ < 1");
  o.Require(run.cpu_seconds < 300.0, "CPU < 5 min");
  o.Note("source " + Fmt("%.2f", src) + ", target " + Fmt("%.2f", tgt) + ", gap " +
         Fmt("%.2f", r.gap.gap_acc) + ", FISH(0.25) " + Fmt("%.2f", r.fish.acc_percent) +
         ", FISH(1.0) " + Fmt("%.2f", r.fish_full.acc_percent) + ", DUA " +
         Fmt("%.2f", r.dua.acc_percent) + ", Tent " + Fmt("%.2f", r.tent.acc_percent) +
         ", Tent x" + std::to_string(r.config.tent_extra_epochs) + " " +
         Fmt("%.2f", r.tent_extra.acc_percent) + ", CPU " + Fmt("%.1f", run.cpu_seconds) + " s");
  return o;
}

Outcome Determinism(const MissionRun& first) {
  Outcome o;
  const MissionRun second = RunTimedMission();
  TempDir dir("accept");
  const MissionResult* runs[2] = {&first.result, &second.result};
  for (int i = 0; i < 2; ++i) {
    const auto root = dir / std::to_string(i);
    SaveCheckpoint(runs[i]->source_model, root / "source");
    SaveCheckpoint(runs[i]->fish_model, root / "fish");
    SaveCheckpoint(runs[i]->dua_model, root / "dua");
    SaveCheckpoint(runs[i]->tent_model, root / "tent");
    WriteDelta(runs[i]->fish_delta, DeltaDtype::kFp32, root / "fish.udlt");
    WriteTextFile(root / "mission.json", runs[i]->ToJson());
    WriteTextFile(root / "dua_report.json", runs[i]->dua_report.ToJson());
    WriteTextFile(root / "tent_report.json", runs[i]->tent_report.ToJson());
  }
  o.Require(SameTree(dir / "0", dir / "1"), "byte-identical artifacts");
  o.Note("4 checkpoints, 1 delta, 3 reports compared byte for byte");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace cloudadapt

int main() {
  using namespace cloudadapt;
  MissionRun mission;
  const std::vector<Criterion> criteria = {
      {1, "metric oracle", 1.0, MetricOracle},
      {2, "fisher oracle", 30.0, FisherCheck},
      {3, "gradient checks", 60.0, GradientChecks},
      {4, "fish structural laws", 60.0, FishLaws},
      {5, "dua closed form", 10.0, DuaClosedForm},
      {6, "driver accounting", 0.0, DriverAccounting},
      {7, "wire format", 10.0, WireFormat},
      {8, "bandwidth accounting", 0.0, Bandwidth},
      {9, "synthetic gap fixture", 0.0, [&] {
         mission = RunTimedMission();
         return SyntheticGap(mission);
       }},
      {10, "determinism", 0.0, [&] { return Determinism(mission); }},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.Note("over time limit");
    }
    failures += !o.pass;
    std::printf("%s  criterion %2d  %-24s %8.3f s%s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                secs, c.limit_seconds > 0 ? Fmt(" (< %.0f s)", c.limit_seconds).c_str() : "        ",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

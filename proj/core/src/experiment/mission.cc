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

#include "cloudadapt/experiment/mission.h"

#include <algorithm>
#include <string>

#include "cloudadapt/common/error.h"
#include "cloudadapt/fish/finetune.h"
#include "cloudadapt/fish/fisher.h"
#include "json.hpp"

namespace cloudadapt {
namespace {

using nlohmann::json;

json TrainJson(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"epochs", c.epochs},
          {"batch_size", c.batch_size},       {"seed", c.seed},
          {"schedule", LrScheduleName(c.schedule)}, {"decay_factor", c.decay_factor},
          {"decay_period", c.decay_period}};
}

json MetricsJsonValue(const MetricsReport& r) { return json::parse(r.ToJson()); }

std::vector<DataCube> Prefix(std::span<const DataCube> stream, size_t n) {
  return {stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(std::min(n, stream.size()))};
}

}  // namespace

MissionConfig::MissionConfig() {
  stage1.seed = 1;
  stage2.seed = 2;
  finetune.seed = 3;
  finetune.epochs = 10;
  finetune.learning_rate = 3e-3;
}

void MissionConfig::Validate() const {
  stage1.Validate();
  stage2.Validate();
  finetune.Validate();
  dua.Validate();
  tent.Validate();
  MaskCardinality(sparsity, 1);
  if (n_per_split < 2) throw InvalidArgumentError("n_per_split must be >= 2");
  if (dua_batch < 1 || tent_batch < 1) throw InvalidArgumentError("TTA batch sizes must be >= 1");
  if (tent_extra_epochs < 0) throw InvalidArgumentError("tent_extra_epochs must be >= 0");
}

std::string MissionConfig::ToJson() const {
  json j;
  j["seed"] = seed;
  j["arch_preset"] = arch_preset;
  j["geometry"] = {geometry.height, geometry.width, geometry.channels};
  j["n_per_split"] = n_per_split;
  j["shift_preset"] = shift_preset;
  j["stage1"] = TrainJson(stage1);
  j["stage2"] = TrainJson(stage2);
  j["finetune"] = TrainJson(finetune);
  j["sparsity"] = sparsity;
  j["dua"] = {{"omega", dua.omega},
              {"delta", dua.delta_floor},
              {"m0", dua.m0},
              {"augment_factor", dua.augment_factor},
              {"seed", dua.seed},
              {"batch", dua_batch},
              {"samples", dua_samples}};
  j["tent"] = {{"learning_rate", tent.learning_rate},
               {"epochs", tent.epochs},
               {"batch", tent_batch},
               {"extra_epochs", tent_extra_epochs}};
  return j.dump(2);
}

PretrainOutcome PretrainSource(const DomainPair& pair, const MissionConfig& cfg) {
  PretrainOutcome out;
  out.model = BuildModel(ArchPreset(cfg.arch_preset, cfg.geometry.channels), cfg.seed);
  out.stage1 = TrainExtractor(out.model, pair.source.low.train, cfg.stage1);
  out.stage2 = TrainClassifier(out.model, pair.source.high.train, cfg.stage2);
  return out;
}

FishOutcome RunFish(const DetectorModel& source, const LabeledDataset& target_train,
                    const TrainConfig& cfg, double sparsity) {
  FishOutcome out;
  out.model = source;
  out.model.set_mode(StatsMode::kEvalStats);
  if (sparsity >= 1.0) {
    out.mask = FullMask(source.num_params());
  } else {
    out.mask = SelectMask(ComputeFisherScores(out.model, target_train), sparsity);
  }
  out.report = MaskedFinetune(out.model, out.mask, target_train, cfg);
  out.delta = ExtractDelta(source.params(), out.model.params(), out.mask);
  return out;
}

TtaOutcome RunDua(const DetectorModel& source, std::span<const DataCube> stream, size_t n_batch,
                  const DUAConfig& cfg) {
  TtaOutcome out{source, {}};
  DuaAdapter adapter(cfg);
  out.report = RunTta(out.model, stream, n_batch, adapter);
  return out;
}

TtaOutcome RunTent(const DetectorModel& source, std::span<const DataCube> stream,
                   size_t n_batch, const TentConfig& cfg) {
  TtaOutcome out{source, {}};
  TentAdapter adapter(cfg);
  out.report = RunTta(out.model, stream, n_batch, adapter);
  return out;
}

EvalOptions TentEvalOptions(size_t n_batch) {
  EvalOptions o;
  o.mode = StatsMode::kTrainStats;
  o.batch_size = n_batch;
  return o;
}

namespace {

MetricsReport EvalAs(const DetectorModel& m, const LabeledDataset& ds, EvalOptions o,
                     const std::string& name) {
  o.model_name = name;
  return Evaluate(m, ds, o);
}

MetricsReport EvalTent(const TtaOutcome& t, const LabeledDataset& ds, size_t n_batch,
                       const std::string& name) {
  // A Tent run that never adapted is still the source model.
  EvalOptions o = t.report.batches_processed > 0 ? TentEvalOptions(n_batch) : EvalOptions{};
  return EvalAs(t.model, ds, o, name);
}

}  // namespace

MissionResult RunMission(const MissionConfig& cfg) {
  cfg.Validate();
  const ShiftConfig shift = ShiftPreset(cfg.shift_preset, cfg.geometry.channels, cfg.seed);
  const DomainPair pair = SynthDomainPair(cfg.n_per_split, cfg.geometry, shift, cfg.seed);
  const LabeledDataset& src_test = pair.source.high.test;
  const LabeledDataset& tgt_train = pair.target.high.train;
  const LabeledDataset& tgt_test = pair.target.high.test;
  const std::vector<DataCube> stream = tgt_train.Cubes();

  MissionResult r;
  r.config = cfg;
  PretrainOutcome pre = PretrainSource(pair, cfg);
  r.source_model = pre.model;
  r.gap = ComputeGapReport(r.source_model, src_test, tgt_test, "source");
  r.source_test = r.gap.source_test;

  FishOutcome fish = RunFish(r.source_model, tgt_train, cfg.finetune, cfg.sparsity);
  r.fish = EvalAs(fish.model, tgt_test, {}, "fish");
  r.fish_model = std::move(fish.model);
  r.fish_delta = std::move(fish.delta);
  FishOutcome full = RunFish(r.source_model, tgt_train, cfg.finetune, 1.0);
  r.fish_full = EvalAs(full.model, tgt_test, {}, "finetune");

  TtaOutcome dua = RunDua(r.source_model, Prefix(stream, cfg.dua_samples), cfg.dua_batch, cfg.dua);
  r.dua = EvalAs(dua.model, tgt_test, {}, "dua");
  r.dua_model = std::move(dua.model);
  r.dua_report = std::move(dua.report);

  TtaOutcome tent = RunTent(r.source_model, stream, cfg.tent_batch, cfg.tent);
  r.tent = EvalTent(tent, tgt_test, cfg.tent_batch, "tent");
  r.tent_model = std::move(tent.model);
  r.tent_report = std::move(tent.report);

  TentConfig extra = cfg.tent;
  extra.epochs = cfg.tent_extra_epochs;
  const TtaOutcome tent_extra = RunTent(r.source_model, stream, cfg.tent_batch, extra);
  r.tent_extra = EvalTent(tent_extra, tgt_test, cfg.tent_batch, "tent-extra");
  return r;
}

std::string MissionResult::ToJson() const {
  json j;
  j["config"] = json::parse(config.ToJson());
  j["source_test"] = MetricsJsonValue(source_test);
  j["gap"] = json::parse(gap.ToJson());
  j["fish"] = MetricsJsonValue(fish);
  j["fish_full"] = MetricsJsonValue(fish_full);
  j["fish_delta_entries"] = fish_delta.size();
  j["dua"] = MetricsJsonValue(dua);
  j["tent"] = MetricsJsonValue(tent);
  j["tent_extra"] = MetricsJsonValue(tent_extra);
  j["dua_report"] = json::parse(dua_report.ToJson());
  j["tent_report"] = json::parse(tent_report.ToJson());
  return j.dump(2);
}

std::string Sweep::ToJson() const {
  json j;
  j["name"] = name;
  j["x_label"] = x_label;
  json pts = json::array();
  for (const SweepPoint& p : points) {
    pts.push_back({{"x", p.x}, {"metrics", MetricsJsonValue(p.metrics)}});
  }
  j["points"] = pts;
  return j.dump(2);
}

Sweep SparsitySweep(const DetectorModel& source, const LabeledDataset& target_train,
                    const LabeledDataset& target_test, const TrainConfig& cfg,
                    const std::vector<double>& sparsities) {
  Sweep s{"sparsity", "fraction of weights updated", {}};
  for (double l : sparsities) {
    const FishOutcome f = RunFish(source, target_train, cfg, l);
    s.points.push_back({l, EvalAs(f.model, target_test, {}, "fish")});
  }
  return s;
}

Sweep DuaSampleSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, size_t n_batch, const DUAConfig& cfg,
                     const std::vector<size_t>& counts) {
  Sweep s{"dua-samples", "adaptation samples", {}};
  for (size_t n : counts) {
    const TtaOutcome t = RunDua(source, Prefix(stream, n), n_batch, cfg);
    s.points.push_back({static_cast<double>(n), EvalAs(t.model, target_test, {}, "dua")});
  }
  return s;
}

Sweep DuaAugmentSweep(const DetectorModel& source, std::span<const DataCube> stream,
                      const LabeledDataset& target_test, size_t n_batch, const DUAConfig& cfg,
                      const std::vector<int>& factors) {
  Sweep s{"dua-augment", "augmentation factor", {}};
  for (int a : factors) {
    DUAConfig c = cfg;
    c.augment_factor = a;
    const TtaOutcome t = RunDua(source, stream, n_batch, c);
    s.points.push_back({static_cast<double>(a), EvalAs(t.model, target_test, {}, "dua")});
  }
  return s;
}

Sweep TentBatchSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, const TentConfig& cfg,
                     const std::vector<size_t>& batch_sizes) {
  Sweep s{"tent-batch", "batch size", {}};
  for (size_t b : batch_sizes) {
    const TtaOutcome t = RunTent(source, stream, b, cfg);
    s.points.push_back({static_cast<double>(b), EvalTent(t, target_test, b, "tent")});
  }
  return s;
}

Sweep TentEpochSweep(const DetectorModel& source, std::span<const DataCube> stream,
                     const LabeledDataset& target_test, size_t n_batch, const TentConfig& cfg,
                     const std::vector<int>& epochs) {
  Sweep s{"tent-epochs", "epochs per batch", {}};
  for (int e : epochs) {
    TentConfig c = cfg;
    c.epochs = e;
    const TtaOutcome t = RunTent(source, stream, n_batch, c);
    s.points.push_back({static_cast<double>(e), EvalTent(t, target_test, n_batch, "tent")});
  }
  return s;
}

}  // namespace cloudadapt

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

// cloudadapt: command-line harness for the desk-scale mission loop.
//
//   cloudadapt synth    --seed 7 --shift-preset strong --out data/
//   cloudadapt train    --data data/ --out ckpt/source
//   cloudadapt gap      --model ckpt/source --source data/source/th70/test
//                       --target data/target/th70/test
//   cloudadapt eval     --model ckpt/source --data data/target/th70/test
//   cloudadapt adapt fish|dua|tent --model ckpt/source
//                       --data data/target/th70/train --out ckpt/adapted
//   cloudadapt sweep sparsity|dua-samples|dua-augment|tent-batch|tent-epochs
//   cloudadapt mission  --out runs/m1
//   cloudadapt budget   --params 1292546 --sparsity 0.25
//   cloudadapt plot     --sweep sweep.json --out sweep.svg
//
// Every command accepts --config FILE (JSON; see cli_config.h) and echoes the
// resolved configuration into its JSON output. Environment variables are
// never read.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.h"
#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/common/error.h"
#include "cloudadapt/data/dataset_io.h"
#include "cloudadapt/data/synthetic.h"
#include "cloudadapt/detector/checkpoint.h"
#include "cloudadapt/eval/metrics.h"
#include "cloudadapt/experiment/mission.h"
#include "cloudadapt/fish/fisher.h"
#include "cloudadapt/fish/mask.h"
#include "cloudadapt/uplink/budget.h"
#include "cloudadapt/uplink/udlt.h"
#include "json.hpp"
#include "svg_plot.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cloudadapt::tools {
namespace {

constexpr int kOutputFormatVersion = 1;

// A command failed for a reason the user can fix (missing flag, bad value).
struct UsageError : Error {
  using Error::Error;
};

json Envelope(const CLI::App& app, const std::string& command) {
  json j;
  j["command"] = command;
  j["output_format_version"] = kOutputFormatVersion;
  j["dataset_format_version"] = kDatasetFormatVersion;
  j["checkpoint_format_version"] = kCheckpointFormatVersion;
  j["udlt_version"] = kUdltVersion;
  j["config"] = ResolvedConfig(app);
  return j;
}

void Emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
  } else {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    WriteTextFile(path, text);
  }
}

void Require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required option --") + flag);
}

json Parse(const std::string& text) { return json::parse(text); }

// Train options shared by train, adapt fish and the sparsity sweep.
struct TrainFlags {
  double lr;
  int epochs;
  int batch_size;
  uint64_t seed;
  std::string schedule = "constant";
  double decay_factor = 0.5;
  int decay_period = 10;

  TrainFlags(const TrainConfig& d) : lr(d.learning_rate), epochs(d.epochs),
                                     batch_size(d.batch_size), seed(d.seed) {}

  void Add(CLI::App* app) {
    app->add_option("--lr", lr, "learning rate");
    app->add_option("--epochs", epochs, "epochs");
    app->add_option("--batch-size", batch_size, "mini-batch size");
    app->add_option("--train-seed", seed, "shuffle seed");
    app->add_option("--schedule", schedule, "constant|step")
        ->check(CLI::IsMember({"constant", "step"}));
    app->add_option("--decay-factor", decay_factor, "step-decay factor");
    app->add_option("--decay-period", decay_period, "step-decay period in epochs");
  }

  TrainConfig Get() const {
    TrainConfig c;
    c.learning_rate = lr;
    c.epochs = epochs;
    c.batch_size = batch_size;
    c.seed = seed;
    c.schedule = ParseLrSchedule(schedule);
    c.decay_factor = decay_factor;
    c.decay_period = decay_period;
    c.Validate();
    return c;
  }
};

struct DuaFlags {
  double omega, delta, m0;
  int augment;
  uint64_t aug_seed;

  explicit DuaFlags(const DUAConfig& d)
      : omega(d.omega), delta(d.delta_floor), m0(d.m0), augment(d.augment_factor),
        aug_seed(d.seed) {}

  void Add(CLI::App* app) {
    app->add_option("--omega", omega, "momentum decay");
    app->add_option("--delta", delta, "momentum floor increment");
    app->add_option("--m0", m0, "initial momentum");
    app->add_option("--augment", augment, "augmentation factor (1 = off)");
    app->add_option("--aug-seed", aug_seed, "augmentation seed");
  }

  DUAConfig Get() const {
    DUAConfig c;
    c.omega = omega;
    c.delta_floor = delta;
    c.m0 = m0;
    c.augment_factor = augment;
    c.seed = aug_seed;
    c.Validate();
    return c;
  }
};

// ---------------------------------------------------------------------------

struct SynthArgs {
  uint64_t seed = 7;
  int n_per_split = MissionConfig().n_per_split;
  std::string shift = "strong";
  int height = 32, width = 32, channels = 3;
  std::string storage = "concatenated";
  std::string out;
};

void RunSynth(const CLI::App& app, const SynthArgs& a) {
  Require(a.out, "out");
  const SceneGeometry geometry{a.height, a.width, a.channels};
  const ShiftConfig shift = ShiftPreset(a.shift, a.channels, a.seed);
  const DomainPair pair = SynthDomainPair(a.n_per_split, geometry, shift, a.seed);
  const DatasetStorage storage =
      a.storage == "per_item" ? DatasetStorage::kPerItem : DatasetStorage::kConcatenated;
  const fs::path root(a.out);
  json written = json::array();
  auto save = [&](const DomainSplits& d, const std::string& domain) {
    const std::pair<const SplitPair*, std::string> thresholds[] = {{&d.low, "th30"},
                                                                   {&d.high, "th70"}};
    for (const auto& [sp, tag] : thresholds) {
      for (const auto& [ds, split] : {std::pair{&sp->train, "train"}, {&sp->test, "test"}}) {
        const fs::path dir = root / domain / tag / split;
        SaveDataset(*ds, dir, storage);
        written.push_back({{"name", ds->name}, {"dir", (fs::path(domain) / tag / split).string()},
                           {"count", ds->size()}});
      }
    }
  };
  save(pair.source, "source");
  save(pair.target, "target");
  json out = Envelope(app, "synth");
  out["result"] = {{"datasets", written},
                   {"shift", {{"gain", shift.gain},
                              {"offset", shift.offset},
                              {"noise_sigma", shift.noise_sigma},
                              {"seed", shift.seed}}}};
  Emit(out, (root / "synth.json").string());
}

struct TrainArgs {
  std::string data, out, preset = "cloudscout-mini";
  uint64_t seed = 7;
  TrainFlags flags{MissionConfig().stage1};
  std::string report;
};

void RunTrain(const CLI::App& app, const TrainArgs& a) {
  Require(a.data, "data");
  Require(a.out, "out");
  const fs::path root(a.data);
  const LabeledDataset th30 = LoadDataset(root / "source" / "th30" / "train");
  const LabeledDataset th70 = LoadDataset(root / "source" / "th70" / "train");
  if (th30.empty()) throw UsageError("training set is empty");
  TrainConfig s1 = a.flags.Get();
  TrainConfig s2 = s1;
  s2.seed = s1.seed + 1;
  DetectorModel model = BuildModel(ArchPreset(a.preset, th30.front_cube().channels()), a.seed);
  const TrainReport r1 = TrainExtractor(model, th30, s1);
  const TrainReport r2 = TrainClassifier(model, th70, s2);
  json out = Envelope(app, "train");
  out["result"] = {{"num_params", model.num_params()},
                   {"stage1_epoch_losses", r1.epoch_losses},
                   {"stage2_epoch_losses", r2.epoch_losses}};
  SaveCheckpoint(model, a.out, out.dump());
  Emit(out, a.report);
}

struct EvalArgs {
  std::string model, data, out, mode = "EVAL_STATS";
  size_t batch_size = 64;
};

void RunEval(const CLI::App& app, const EvalArgs& a) {
  Require(a.model, "model");
  Require(a.data, "data");
  const DetectorModel model = LoadCheckpoint(a.model);
  EvalOptions o;
  o.mode = ParseStatsMode(a.mode);
  o.batch_size = a.batch_size;
  o.model_name = fs::path(a.model).filename().string();
  json out = Envelope(app, "eval");
  out["result"] = Parse(Evaluate(model, LoadDataset(a.data), o).ToJson());
  Emit(out, a.out);
}

struct GapArgs {
  std::string model, source, target, out;
};

void RunGap(const CLI::App& app, const GapArgs& a) {
  Require(a.model, "model");
  Require(a.source, "source");
  Require(a.target, "target");
  const DetectorModel model = LoadCheckpoint(a.model);
  json out = Envelope(app, "gap");
  out["result"] = Parse(ComputeGapReport(model, LoadDataset(a.source), LoadDataset(a.target),
                                         fs::path(a.model).filename().string())
                            .ToJson());
  Emit(out, a.out);
}

// ---------------------------------------------------------------------------

struct FishArgs {
  std::string model, data, out, delta, report, dtype = "fp32";
  double sparsity = 0.25;
  uint64_t budget_bytes = 5'000'000;
  TrainFlags flags{MissionConfig().finetune};
};

void RunAdaptFish(const CLI::App& app, const FishArgs& a) {
  Require(a.model, "model");
  Require(a.data, "data");
  Require(a.out, "out");
  const DetectorModel source = LoadCheckpoint(a.model);
  const LabeledDataset train = LoadDataset(a.data);
  const DeltaDtype dtype = ParseDeltaDtype(a.dtype);
  const FishOutcome fish = RunFish(source, train, a.flags.Get(), a.sparsity);
  json out = Envelope(app, "adapt fish");
  const BudgetReport budget = ComputeBudgetReport(fish.delta, source, dtype, a.budget_bytes);
  out["result"] = {{"mask_entries", fish.mask.indices.size()},
                   {"epoch_losses", fish.report.epoch_losses},
                   {"budget", Parse(budget.ToJson())}};
  SaveCheckpoint(fish.model, a.out, out.dump());
  if (!a.delta.empty()) WriteDelta(fish.delta, dtype, a.delta);
  Emit(out, a.report);
}

struct DuaArgs {
  std::string model, data, out, report;
  long long n_samples = -1;
  size_t batch = MissionConfig().dua_batch;
  DuaFlags flags{DUAConfig{}};
};

std::vector<DataCube> Stream(const LabeledDataset& ds, long long n) {
  std::vector<DataCube> cubes = ds.Cubes();
  if (n >= 0 && static_cast<size_t>(n) < cubes.size()) cubes.resize(static_cast<size_t>(n));
  return cubes;
}

void RunAdaptDua(const CLI::App& app, const DuaArgs& a) {
  Require(a.model, "model");
  Require(a.data, "data");
  Require(a.out, "out");
  const DetectorModel source = LoadCheckpoint(a.model);
  const TtaOutcome t = RunDua(source, Stream(LoadDataset(a.data), a.n_samples), a.batch,
                              a.flags.Get());
  json out = Envelope(app, "adapt dua");
  out["result"] = Parse(t.report.ToJson());
  SaveCheckpoint(t.model, a.out, out.dump());
  Emit(out, a.report);
}

struct TentArgs {
  std::string model, data, out, report;
  long long n_samples = -1;
  size_t batch = MissionConfig().tent_batch;
  double lr = TentConfig{}.learning_rate;
  int epochs = TentConfig{}.epochs;
};

void RunAdaptTent(const CLI::App& app, const TentArgs& a) {
  Require(a.model, "model");
  Require(a.data, "data");
  Require(a.out, "out");
  const DetectorModel source = LoadCheckpoint(a.model);
  TentConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.epochs = a.epochs;
  const TtaOutcome t = RunTent(source, Stream(LoadDataset(a.data), a.n_samples), a.batch, cfg);
  json out = Envelope(app, "adapt tent");
  out["result"] = Parse(t.report.ToJson());
  out["result"]["eval_stats_mode"] = t.report.batches_processed > 0 ? "TRAIN_STATS" : "EVAL_STATS";
  SaveCheckpoint(t.model, a.out, out.dump());
  Emit(out, a.report);
}

// ---------------------------------------------------------------------------

Chart SweepChart(const Sweep& s) {
  Chart c;
  c.title = s.name;
  c.x_label = s.x_label;
  c.y_label = "percent";
  Series acc{"ACC", "#1f77b4", {}, {}};
  Series fp{"FP", "#d62728", {}, {}};
  for (const SweepPoint& p : s.points) {
    acc.x.push_back(p.x);
    acc.y.push_back(p.metrics.acc_percent);
    fp.x.push_back(p.x);
    fp.y.push_back(p.metrics.fp_percent);
  }
  c.series = {acc, fp};
  return c;
}

void WritePlot(const Chart& chart, const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  WriteTextFile(path, RenderSvg(chart));
}

struct SweepArgs {
  std::string kind, model, train, test, out, plot;
  std::vector<double> values;
  TrainFlags flags{MissionConfig().finetune};
  DuaFlags dua{DUAConfig{}};
  size_t batch = 0;  // 0 = command default
  double tent_lr = TentConfig{}.learning_rate;
  int tent_epochs = TentConfig{}.epochs;
};

void RunSweep(const CLI::App& app, const SweepArgs& a) {
  Require(a.model, "model");
  Require(a.train, "train");
  Require(a.test, "test");
  if (a.values.empty()) throw UsageError("missing --values");
  const DetectorModel source = LoadCheckpoint(a.model);
  const LabeledDataset train = LoadDataset(a.train);
  const LabeledDataset test = LoadDataset(a.test);
  const std::vector<DataCube> stream = train.Cubes();
  const MissionConfig defaults;
  Sweep s;
  auto sizes = [&] {
    std::vector<size_t> v;
    for (double x : a.values) {
      if (x < 0 || x != static_cast<double>(static_cast<size_t>(x))) {
        throw UsageError("sweep values must be nonnegative integers for " + a.kind);
      }
      v.push_back(static_cast<size_t>(x));
    }
    return v;
  };
  TentConfig tent;
  tent.learning_rate = a.tent_lr;
  tent.epochs = a.tent_epochs;
  if (a.kind == "sparsity") {
    s = SparsitySweep(source, train, test, a.flags.Get(), a.values);
  } else if (a.kind == "dua-samples") {
    s = DuaSampleSweep(source, stream, test, a.batch ? a.batch : defaults.dua_batch, a.dua.Get(),
                       sizes());
  } else if (a.kind == "dua-augment") {
    std::vector<int> f;
    for (size_t v : sizes()) f.push_back(static_cast<int>(v));
    s = DuaAugmentSweep(source, stream, test, a.batch ? a.batch : defaults.dua_batch, a.dua.Get(),
                        f);
  } else if (a.kind == "tent-batch") {
    s = TentBatchSweep(source, stream, test, tent, sizes());
  } else {
    std::vector<int> e;
    for (size_t v : sizes()) e.push_back(static_cast<int>(v));
    s = TentEpochSweep(source, stream, test, a.batch ? a.batch : defaults.tent_batch, tent, e);
  }
  json out = Envelope(app, "sweep " + a.kind);
  out["result"] = Parse(s.ToJson());
  Emit(out, a.out);
  if (!a.plot.empty()) WritePlot(SweepChart(s), a.plot);
}

struct MissionArgs {
  uint64_t seed = MissionConfig().seed;
  int n_per_split = MissionConfig().n_per_split;
  std::string shift = MissionConfig().shift_preset;
  std::string out;
};

void RunMissionCmd(const CLI::App& app, const MissionArgs& a) {
  Require(a.out, "out");
  MissionConfig cfg;
  cfg.seed = a.seed;
  cfg.n_per_split = a.n_per_split;
  cfg.shift_preset = a.shift;
  const MissionResult r = RunMission(cfg);
  const fs::path root(a.out);
  json out = Envelope(app, "mission");
  out["result"] = Parse(r.ToJson());
  const std::string prov = out.dump();
  SaveCheckpoint(r.source_model, root / "source", prov);
  SaveCheckpoint(r.fish_model, root / "fish", prov);
  SaveCheckpoint(r.dua_model, root / "dua", prov);
  SaveCheckpoint(r.tent_model, root / "tent", prov);
  WriteDelta(r.fish_delta, DeltaDtype::kFp32, root / "fish.udlt");
  Emit(out, (root / "mission.json").string());
}

struct BudgetArgs {
  uint64_t params = 0;
  double sparsity = 0.0;
  long long entries = -1;
  std::string dtype = "fp32", out;
  uint64_t budget_bytes = 5'000'000;
};

void RunBudget(const CLI::App& app, const BudgetArgs& a) {
  if (a.params == 0) throw UsageError("missing --params");
  uint64_t k;
  if (a.entries >= 0) {
    k = static_cast<uint64_t>(a.entries);
  } else if (a.sparsity > 0.0) {
    k = MaskCardinality(a.sparsity, a.params);
  } else {
    throw UsageError("give --sparsity or --entries");
  }
  json out = Envelope(app, "budget");
  out["result"] =
      Parse(MakeBudgetReport(k, a.params, ParseDeltaDtype(a.dtype), a.budget_bytes).ToJson());
  Emit(out, a.out);
}

struct PlotArgs {
  std::string sweep, out;
};

void RunPlot(const PlotArgs& a) {
  Require(a.sweep, "sweep");
  Require(a.out, "out");
  const json j = json::parse(ReadTextFile(a.sweep));
  const json& s = j.contains("result") ? j["result"] : j;
  Sweep sw;
  sw.name = s.at("name").get<std::string>();
  sw.x_label = s.at("x_label").get<std::string>();
  for (const json& p : s.at("points")) {
    SweepPoint pt;
    pt.x = p.at("x").get<double>();
    pt.metrics.acc_percent = p.at("metrics").at("acc_percent").get<double>();
    pt.metrics.fp_percent = p.at("metrics").at("fp_percent").get<double>();
    sw.points.push_back(pt);
  }
  WritePlot(SweepChart(sw), a.out);
}

}  // namespace
}  // namespace cloudadapt::tools

int main(int argc, char** argv) {
  using namespace cloudadapt;
  using namespace cloudadapt::tools;

  CLI::App app{"Desk-scale domain adaptation for onboard cloud detection", "cloudadapt"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option values")
      ->check(CLI::ExistingFile);

  SynthArgs synth;
  CLI::App* c_synth = app.add_subcommand("synth", "synthesize a source/target dataset pair");
  c_synth->add_option("--seed", synth.seed, "generator seed");
  c_synth->add_option("--n-per-split", synth.n_per_split, "scenes per TRAIN and TEST split");
  c_synth->add_option("--shift-preset", synth.shift, "target sensor shift")
      ->check(CLI::IsMember(ShiftPresetNames()));
  c_synth->add_option("--height", synth.height);
  c_synth->add_option("--width", synth.width);
  c_synth->add_option("--channels", synth.channels);
  c_synth->add_option("--storage", synth.storage, "concatenated|per_item")
      ->check(CLI::IsMember({"concatenated", "per_item"}));
  c_synth->add_option("--out", synth.out, "output directory");

  TrainArgs train;
  CLI::App* c_train = app.add_subcommand("train", "two-stage source pretraining");
  c_train->add_option("--data", train.data, "synth output directory");
  c_train->add_option("--preset", train.preset, "architecture preset")
      ->check(CLI::IsMember(ArchPresetNames()));
  c_train->add_option("--seed", train.seed, "initialization seed");
  train.flags.Add(c_train);
  c_train->add_option("--out", train.out, "checkpoint directory");
  c_train->add_option("--report", train.report, "report JSON path (default stdout)");

  EvalArgs eval;
  CLI::App* c_eval = app.add_subcommand("eval", "ACC/FP of a checkpoint on a dataset");
  c_eval->add_option("--model", eval.model, "checkpoint directory");
  c_eval->add_option("--data", eval.data, "dataset directory");
  c_eval->add_option("--stats-mode", eval.mode, "EVAL_STATS|TRAIN_STATS")
      ->check(CLI::IsMember({"EVAL_STATS", "TRAIN_STATS"}));
  c_eval->add_option("--batch-size", eval.batch_size, "items per forward pass");
  c_eval->add_option("--out", eval.out, "report JSON path (default stdout)");

  GapArgs gap;
  CLI::App* c_gap = app.add_subcommand("gap", "source/target domain gap of a checkpoint");
  c_gap->add_option("--model", gap.model, "checkpoint directory");
  c_gap->add_option("--source", gap.source, "source TEST dataset");
  c_gap->add_option("--target", gap.target, "target TEST dataset");
  c_gap->add_option("--out", gap.out, "report JSON path (default stdout)");

  CLI::App* c_adapt = app.add_subcommand("adapt", "adapt a checkpoint to the target domain");
  c_adapt->require_subcommand(1);
  FishArgs fish;
  CLI::App* c_fish = c_adapt->add_subcommand("fish", "Fisher-masked supervised fine-tuning");
  c_fish->add_option("--model", fish.model, "source checkpoint");
  c_fish->add_option("--data", fish.data, "labeled target TRAIN dataset");
  c_fish->add_option("--sparsity", fish.sparsity, "fraction of weights updated, (0, 1]");
  fish.flags.Add(c_fish);
  c_fish->add_option("--dtype", fish.dtype, "delta value type")
      ->check(CLI::IsMember({"fp32", "fp16"}));
  c_fish->add_option("--budget-bytes", fish.budget_bytes, "uplink budget");
  c_fish->add_option("--out", fish.out, "adapted checkpoint directory");
  c_fish->add_option("--delta", fish.delta, "UDLT delta output path");
  c_fish->add_option("--report", fish.report, "report JSON path (default stdout)");

  DuaArgs dua;
  CLI::App* c_dua = c_adapt->add_subcommand("dua", "running-statistics adaptation");
  c_dua->add_option("--model", dua.model, "source checkpoint");
  c_dua->add_option("--data", dua.data, "target dataset used as the unlabeled stream");
  c_dua->add_option("--n-samples", dua.n_samples, "stream prefix length (-1 = all)");
  c_dua->add_option("--batch", dua.batch, "samples per adaptation call");
  dua.flags.Add(c_dua);
  c_dua->add_option("--out", dua.out, "adapted checkpoint directory");
  c_dua->add_option("--report", dua.report, "report JSON path (default stdout)");

  TentArgs tent;
  CLI::App* c_tent = c_adapt->add_subcommand("tent", "entropy minimization on BN affine terms");
  c_tent->add_option("--model", tent.model, "source checkpoint");
  c_tent->add_option("--data", tent.data, "target dataset used as the unlabeled stream");
  c_tent->add_option("--n-samples", tent.n_samples, "stream prefix length (-1 = all)");
  c_tent->add_option("--batch", tent.batch, "samples per adaptation call");
  c_tent->add_option("--lr", tent.lr, "step size");
  c_tent->add_option("--epochs", tent.epochs, "gradient steps per batch");
  c_tent->add_option("--out", tent.out, "adapted checkpoint directory");
  c_tent->add_option("--report", tent.report, "report JSON path (default stdout)");

  SweepArgs sweep;
  CLI::App* c_sweep = app.add_subcommand("sweep", "ablation sweeps");
  c_sweep->require_subcommand(1);
  std::vector<CLI::App*> sweep_cmds;
  for (const char* kind : {"sparsity", "dua-samples", "dua-augment", "tent-batch", "tent-epochs"}) {
    CLI::App* c = c_sweep->add_subcommand(kind, std::string("sweep over ") + kind);
    c->add_option("--model", sweep.model, "source checkpoint");
    c->add_option("--train", sweep.train, "target TRAIN dataset (adaptation data)");
    c->add_option("--test", sweep.test, "target TEST dataset");
    c->add_option("--values", sweep.values, "swept values")->delimiter(',');
    c->add_option("--out", sweep.out, "sweep JSON path (default stdout)");
    c->add_option("--plot", sweep.plot, "SVG plot path");
    const std::string k = kind;
    if (k == "sparsity") {
      sweep.flags.Add(c);
    } else if (k.rfind("dua", 0) == 0) {
      c->add_option("--batch", sweep.batch, "samples per adaptation call");
      sweep.dua.Add(c);
    } else {
      if (k == "tent-epochs") c->add_option("--batch", sweep.batch, "samples per adaptation call");
      c->add_option("--lr", sweep.tent_lr, "Tent step size");
      if (k == "tent-batch") c->add_option("--epochs", sweep.tent_epochs, "Tent epochs");
    }
    sweep_cmds.push_back(c);
  }

  MissionArgs mission;
  CLI::App* c_mission = app.add_subcommand("mission", "full seeded mission loop");
  c_mission->add_option("--seed", mission.seed, "master seed");
  c_mission->add_option("--n-per-split", mission.n_per_split, "scenes per split");
  c_mission->add_option("--shift-preset", mission.shift, "target sensor shift")
      ->check(CLI::IsMember(ShiftPresetNames()));
  c_mission->add_option("--out", mission.out, "output directory");

  BudgetArgs budget;
  CLI::App* c_budget = app.add_subcommand("budget", "uplink payload accounting");
  c_budget->add_option("--params", budget.params, "total trainable parameters P");
  c_budget->add_option("--sparsity", budget.sparsity, "mask fraction l");
  c_budget->add_option("--entries", budget.entries, "explicit entry count K");
  c_budget->add_option("--dtype", budget.dtype, "fp32|fp16")->check(CLI::IsMember({"fp32", "fp16"}));
  c_budget->add_option("--budget-bytes", budget.budget_bytes, "uplink budget");
  c_budget->add_option("--out", budget.out, "report JSON path (default stdout)");

  PlotArgs plot;
  CLI::App* c_plot = app.add_subcommand("plot", "render a sweep JSON as SVG");
  c_plot->add_option("--sweep", plot.sweep, "sweep JSON");
  c_plot->add_option("--out", plot.out, "SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    // The innermost selected command receives the config file values.
    CLI::App* cmd = app.get_subcommands().front();
    while (!cmd->get_subcommands().empty()) cmd = cmd->get_subcommands().front();
    if (!config_path.empty()) {
      json cfg;
      try {
        cfg = json::parse(ReadTextFile(config_path));
      } catch (const json::parse_error& e) {
        throw UsageError(std::string("--config: ") + e.what());
      }
      MergeJsonConfig(*cmd, cfg);
    }
    if (cmd == c_synth) {
      RunSynth(*cmd, synth);
    } else if (cmd == c_train) {
      RunTrain(*cmd, train);
    } else if (cmd == c_eval) {
      RunEval(*cmd, eval);
    } else if (cmd == c_gap) {
      RunGap(*cmd, gap);
    } else if (cmd == c_fish) {
      RunAdaptFish(*cmd, fish);
    } else if (cmd == c_dua) {
      RunAdaptDua(*cmd, dua);
    } else if (cmd == c_tent) {
      RunAdaptTent(*cmd, tent);
    } else if (cmd->get_parent() == c_sweep) {
      sweep.kind = cmd->get_name();
      RunSweep(*cmd, sweep);
    } else if (cmd == c_mission) {
      RunMissionCmd(*cmd, mission);
    } else if (cmd == c_budget) {
      RunBudget(*cmd, budget);
    } else if (cmd == c_plot) {
      RunPlot(plot);
    }
  } catch (const UsageError& e) {
    std::cerr << "cloudadapt: " << e.what() << "\n" << app.help() << std::flush;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cloudadapt: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

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

#include "cloudadapt/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cloudadapt/common/error.h"
#include "cloudadapt/train/pretrain.h"
#include "json.hpp"

namespace cloudadapt {
namespace {

void CheckInputs(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw DimensionError("metrics: " + std::to_string(predictions.size()) + " predictions for " +
                         std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) throw DimensionError("metrics: no items");
  for (size_t i = 0; i < labels.size(); ++i) {
    if ((predictions[i] != 0 && predictions[i] != 1) || (labels[i] != 0 && labels[i] != 1)) {
      throw InvalidArgumentError("metrics: entries must be 0 or 1 (item " + std::to_string(i) +
                                 ")");
    }
  }
}

nlohmann::json MetricsJson(const MetricsReport& r) {
  nlohmann::json j;
  j["acc_percent"] = r.acc_percent;
  j["fp_percent"] = r.fp_percent;
  j["n"] = r.n;
  j["negatives"] = r.negatives;
  j["dataset_name"] = r.dataset_name;
  j["model_name"] = r.model_name;
  j["stats_mode"] = r.stats_mode;
  j["batch_size"] = r.batch_size;
  return j;
}

}  // namespace

double Accuracy(std::span<const int> predictions, std::span<const int> labels) {
  CheckInputs(predictions, labels);
  size_t matches = 0;
  for (size_t i = 0; i < labels.size(); ++i) matches += predictions[i] == labels[i];
  return 100.0 * static_cast<double>(matches) / static_cast<double>(labels.size());
}

double FalsePositiveRate(std::span<const int> predictions, std::span<const int> labels) {
  CheckInputs(predictions, labels);
  size_t fp = 0;
  for (size_t i = 0; i < labels.size(); ++i) fp += predictions[i] == 1 && labels[i] == 0;
  return 100.0 * static_cast<double>(fp) / static_cast<double>(labels.size());
}

std::string MetricsReport::ToJson() const { return MetricsJson(*this).dump(2); }

std::vector<int> PredictDataset(const DetectorModel& model, const LabeledDataset& ds,
                                const EvalOptions& opts) {
  if (opts.batch_size == 0) throw InvalidArgumentError("evaluation batch size must be >= 1");
  std::vector<int> preds;
  preds.reserve(ds.size());
  std::vector<size_t> idx;
  for (size_t start = 0; start < ds.size(); start += opts.batch_size) {
    const size_t count = std::min(opts.batch_size, ds.size() - start);
    idx.resize(count);
    std::iota(idx.begin(), idx.end(), start);
    const std::vector<DataCube> cubes = GatherCubes(ds, idx);
    for (const ClassProbs& p : Forward(model, cubes, opts.mode)) preds.push_back(ArgmaxClass(p));
  }
  return preds;
}

MetricsReport Evaluate(const DetectorModel& model, const LabeledDataset& ds,
                       const EvalOptions& opts) {
  const std::vector<int> preds = PredictDataset(model, ds, opts);
  const std::vector<int> labels = ds.Labels();
  MetricsReport r;
  r.acc_percent = Accuracy(preds, labels);
  r.fp_percent = FalsePositiveRate(preds, labels);
  r.n = labels.size();
  r.negatives = static_cast<size_t>(std::count(labels.begin(), labels.end(), 0));
  r.dataset_name = ds.name;
  r.model_name = opts.model_name;
  r.stats_mode = StatsModeName(opts.mode);
  r.batch_size = opts.batch_size;
  return r;
}

GapReport MakeGapReport(const MetricsReport& source_test, const MetricsReport& target_test) {
  GapReport g;
  g.source_test = source_test;
  g.target_test = target_test;
  g.gap_acc = std::fabs(source_test.acc_percent - target_test.acc_percent);
  g.gap_fp = std::fabs(source_test.fp_percent - target_test.fp_percent);
  return g;
}

GapReport ComputeGapReport(const DetectorModel& model, const LabeledDataset& source_test,
                           const LabeledDataset& target_test, const std::string& model_name) {
  EvalOptions opts;
  opts.mode = StatsMode::kEvalStats;
  opts.model_name = model_name;
  return MakeGapReport(Evaluate(model, source_test, opts), Evaluate(model, target_test, opts));
}

std::string GapReport::ToJson() const {
  nlohmann::json j;
  j["source_test"] = MetricsJson(source_test);
  j["target_test"] = MetricsJson(target_test);
  j["gap_acc"] = gap_acc;
  j["gap_fp"] = gap_fp;
  return j.dump(2);
}

}  // namespace cloudadapt

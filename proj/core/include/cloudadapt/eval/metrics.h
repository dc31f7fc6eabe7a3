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

#ifndef CLOUDADAPT_EVAL_METRICS_H_
#define CLOUDADAPT_EVAL_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/model.h"

namespace cloudadapt {

// 100 * matches / M. Throws DimensionError on length mismatch or M = 0 and
// InvalidArgumentError for entries outside {0, 1}.
double Accuracy(std::span<const int> predictions, std::span<const int> labels);

// 100 * |{pred = 1 and label = 0}| / M, normalized by all M items.
double FalsePositiveRate(std::span<const int> predictions, std::span<const int> labels);

struct MetricsReport {
  double acc_percent = 0.0;
  double fp_percent = 0.0;
  size_t n = 0;
  size_t negatives = 0;
  std::string dataset_name;
  std::string model_name;
  std::string stats_mode;
  size_t batch_size = 0;

  std::string ToJson() const;
};

struct EvalOptions {
  StatsMode mode = StatsMode::kEvalStats;
  // Items per forward pass. Only matters in TRAIN_STATS mode, where BN
  // statistics come from each batch; the last batch may be short.
  size_t batch_size = 64;
  std::string model_name;
};

std::vector<int> PredictDataset(const DetectorModel& model, const LabeledDataset& ds,
                                const EvalOptions& opts = {});

MetricsReport Evaluate(const DetectorModel& model, const LabeledDataset& ds,
                       const EvalOptions& opts = {});

struct GapReport {
  MetricsReport source_test;
  MetricsReport target_test;
  double gap_acc = 0.0;  // |source ACC - target ACC|
  double gap_fp = 0.0;   // |source FP - target FP|

  std::string ToJson() const;
};

GapReport MakeGapReport(const MetricsReport& source_test, const MetricsReport& target_test);

// Evaluates both datasets in EVAL_STATS mode.
GapReport ComputeGapReport(const DetectorModel& model, const LabeledDataset& source_test,
                           const LabeledDataset& target_test,
                           const std::string& model_name = "");

}  // namespace cloudadapt

#endif  // CLOUDADAPT_EVAL_METRICS_H_

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

#include "cloudadapt/tta/driver.h"

#include "cloudadapt/common/error.h"
#include "json.hpp"

namespace cloudadapt {

std::string AdaptReport::ToJson() const {
  nlohmann::json j;
  j["adapter"] = adapter;
  j["batch_size"] = batch_size;
  j["batches_processed"] = batches_processed;
  j["samples_consumed"] = samples_consumed;
  j["samples_dropped"] = samples_dropped;
  j["entropy_trace"] = entropy_trace;
  j["momentum_trace"] = momentum_trace;
  return j.dump(2);
}

AdaptReport RunTta(DetectorModel& model, std::span<const DataCube> stream, size_t n_batch,
                   TtaAdapter& adapter) {
  if (n_batch < 1) throw InvalidArgumentError("TTA batch size must be >= 1");
  AdaptReport report;
  report.adapter = adapter.name();
  report.batch_size = n_batch;
  std::vector<DataCube> batch;
  batch.reserve(n_batch);
  for (const DataCube& cube : stream) {
    batch.push_back(cube);
    if (batch.size() == n_batch) {
      adapter.Adapt(model, batch, report);
      ++report.batches_processed;
      report.samples_consumed += n_batch;
      batch.clear();
    }
  }
  report.samples_dropped = batch.size();
  return report;
}

}  // namespace cloudadapt

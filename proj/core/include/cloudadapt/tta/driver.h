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

// Batch-triggered online adaptation. The driver buffers incoming cubes and
// hands the adapter one full batch of n_B at a time; a trailing partial
// batch is dropped and counted.

#ifndef CLOUDADAPT_TTA_DRIVER_H_
#define CLOUDADAPT_TTA_DRIVER_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cloudadapt/data/data_cube.h"
#include "cloudadapt/detector/model.h"

namespace cloudadapt {

struct AdaptReport {
  std::string adapter;
  size_t batch_size = 0;
  size_t batches_processed = 0;
  size_t samples_consumed = 0;
  size_t samples_dropped = 0;
  std::vector<double> entropy_trace;   // Tent: mean entropy per batch
  std::vector<double> momentum_trace;  // DUA: momentum after each batch

  std::string ToJson() const;
};

class TtaAdapter {
 public:
  virtual ~TtaAdapter() = default;
  virtual const char* name() const = 0;
  // Adapts `model` to one full batch and appends to the report's traces.
  virtual void Adapt(DetectorModel& model, std::span<const DataCube> batch,
                     AdaptReport& report) = 0;
};

// Throws InvalidArgumentError if n_batch < 1. The model is untouched when
// the stream holds fewer than n_batch cubes.
AdaptReport RunTta(DetectorModel& model, std::span<const DataCube> stream, size_t n_batch,
                   TtaAdapter& adapter);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_TTA_DRIVER_H_

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

#ifndef CLOUDADAPT_UPLINK_BUDGET_H_
#define CLOUDADAPT_UPLINK_BUDGET_H_

#include <cstdint>
#include <string>

#include "cloudadapt/detector/model.h"
#include "cloudadapt/fish/delta.h"
#include "cloudadapt/uplink/udlt.h"

namespace cloudadapt {

struct BudgetReport {
  uint64_t entries = 0;
  uint64_t total_params = 0;
  std::string dtype;
  uint64_t payload_bytes = 0;     // DeltaPayloadBytes(K, dtype)
  uint64_t full_model_bytes = 0;  // P * DtypeBytes(dtype)
  double fraction = 0.0;          // payload / full
  uint64_t budget_bytes = 0;
  bool fits_budget = false;       // payload <= budget

  std::string ToJson() const;
};

// Pure accounting from (K, P); usable for models that are never built.
BudgetReport MakeBudgetReport(uint64_t k, uint64_t total_params, DeltaDtype dtype,
                              uint64_t budget_bytes);

// Throws DimensionError unless delta.total_params == model.num_params().
BudgetReport ComputeBudgetReport(const SparseDelta& delta, const DetectorModel& model,
                                 DeltaDtype dtype, uint64_t budget_bytes);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_UPLINK_BUDGET_H_

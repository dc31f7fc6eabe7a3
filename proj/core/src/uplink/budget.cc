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

#include "cloudadapt/uplink/budget.h"

#include <string>

#include "cloudadapt/common/error.h"
#include "json.hpp"

namespace cloudadapt {

BudgetReport MakeBudgetReport(uint64_t k, uint64_t total_params, DeltaDtype dtype,
                              uint64_t budget_bytes) {
  if (k > total_params) throw InvalidArgumentError("budget: more entries than parameters");
  BudgetReport r;
  r.entries = k;
  r.total_params = total_params;
  r.dtype = DeltaDtypeName(dtype);
  r.payload_bytes = DeltaPayloadBytes(k, dtype);
  r.full_model_bytes = total_params * DtypeBytes(dtype);
  r.fraction = r.full_model_bytes == 0
                   ? 0.0
                   : static_cast<double>(r.payload_bytes) / static_cast<double>(r.full_model_bytes);
  r.budget_bytes = budget_bytes;
  r.fits_budget = r.payload_bytes <= budget_bytes;
  return r;
}

BudgetReport ComputeBudgetReport(const SparseDelta& delta, const DetectorModel& model,
                                 DeltaDtype dtype, uint64_t budget_bytes) {
  if (delta.total_params != model.num_params()) {
    throw DimensionError("budget: delta targets " + std::to_string(delta.total_params) +
                         " parameters, model has " + std::to_string(model.num_params()));
  }
  return MakeBudgetReport(delta.size(), delta.total_params, dtype, budget_bytes);
}

std::string BudgetReport::ToJson() const {
  nlohmann::json j;
  j["entries"] = entries;
  j["total_params"] = total_params;
  j["dtype"] = dtype;
  j["payload_bytes"] = payload_bytes;
  j["full_model_bytes"] = full_model_bytes;
  j["fraction"] = fraction;
  j["budget_bytes"] = budget_bytes;
  j["fits_budget"] = fits_budget;
  return j.dump(2);
}

}  // namespace cloudadapt

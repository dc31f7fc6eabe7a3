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

#include "cloudadapt/tta/entropy.h"

#include <cmath>
#include <string>

#include "cloudadapt/common/error.h"

namespace cloudadapt {
namespace {

double PLogP(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

double Entropy(const ClassProbs& probs) { return -(PLogP(probs.p0) + PLogP(probs.p1)); }

double Entropy(std::span<const ClassProbs> probs) {
  double h = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    const ClassProbs& p = probs[i];
    if (!(p.p0 >= 0.0 && p.p0 <= 1.0 && p.p1 >= 0.0 && p.p1 <= 1.0) ||
        std::fabs(p.p0 + p.p1 - 1.0) > 1e-4) {
      throw InvalidArgumentError("entropy: row " + std::to_string(i) +
                                 " is not a probability distribution");
    }
    h += Entropy(p);
  }
  return h;
}

Logits EntropyLogitGradient(const Logits& logits) {
  const ClassProbs p = Softmax(logits);
  const double s = PLogP(p.p0) + PLogP(p.p1);
  return {-(PLogP(p.p0) - p.p0 * s), -(PLogP(p.p1) - p.p1 * s)};
}

}  // namespace cloudadapt

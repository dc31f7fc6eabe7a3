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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "cloudadapt/common/random.h"
#include "cloudadapt/data/synthetic.h"
#include "cloudadapt/detector/model.h"
#include "cloudadapt/fish/delta.h"
#include "cloudadapt/fish/fisher.h"
#include "cloudadapt/fish/mask.h"
#include "cloudadapt/uplink/fp16.h"
#include "cloudadapt/uplink/udlt.h"

namespace cloudadapt {
namespace {

const DomainPair& Pair() {
  static const DomainPair pair =
      SynthDomainPair(32, SceneGeometry{}, ShiftPreset("strong", SceneGeometry{}.channels, 1), 1);
  return pair;
}

const char* const kPresets[] = {"cloudscout-mini", "resnet-mini"};

void BM_Forward(benchmark::State& state) {
  const DetectorModel model =
      BuildModel(ArchPreset(kPresets[state.range(0)], SceneGeometry{}.channels), 1);
  const std::vector<DataCube> batch = Pair().source.high.train.Cubes();
  const std::span<const DataCube> b(batch.data(), static_cast<size_t>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Forward(model, b, StatsMode::kTrainStats));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Forward)->ArgsProduct({{0, 1}, {1, 16}});

void BM_ForwardBackward(benchmark::State& state) {
  const DetectorModel model =
      BuildModel(ArchPreset(kPresets[state.range(0)], SceneGeometry{}.channels), 1);
  const std::vector<DataCube> batch = Pair().source.high.train.Cubes();
  const std::span<const DataCube> b(batch.data(), 16);
  const std::vector<Logits> d(16, Logits{0.5, -0.5});
  for (auto _ : state) {
    ForwardPass pass(model, b, StatsMode::kTrainStats);
    benchmark::DoNotOptimize(pass.Backward(d, ParamScope::All()));
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1);

void BM_FisherScores(benchmark::State& state) {
  DetectorModel model = BuildModel(ArchPreset("cloudscout-mini", SceneGeometry{}.channels), 1);
  model.set_mode(StatsMode::kEvalStats);
  const LabeledDataset& ds = Pair().target.high.train;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeFisherScores(model, ds));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.size()));
}
BENCHMARK(BM_FisherScores)->Unit(benchmark::kMillisecond);

void BM_SelectMask(benchmark::State& state) {
  Rng rng(3);
  FisherScores scores;
  scores.values.resize(static_cast<size_t>(state.range(0)));
  for (double& v : scores.values) v = rng.Uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectMask(scores, 0.01));
  }
}
BENCHMARK(BM_SelectMask)->Arg(1 << 16)->Arg(1 << 20);

SparseDelta RandomDelta(size_t total, size_t k) {
  Rng rng(5);
  std::vector<float> source(total);
  for (float& v : source) v = static_cast<float>(rng.Uniform(-1.0, 1.0));
  std::vector<float> adapted = source;
  SparseMask mask = FullMask(total);
  mask.indices.resize(k);
  for (size_t i : mask.indices) adapted[i] += 0.01f;
  return ExtractDelta(source, adapted, mask);
}

void BM_EncodeDelta(benchmark::State& state) {
  const SparseDelta delta = RandomDelta(1 << 20, static_cast<size_t>(state.range(0)));
  const DeltaDtype dtype = state.range(1) ? DeltaDtype::kFp16 : DeltaDtype::kFp32;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EncodeDelta(delta, dtype));
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<int64_t>(DeltaPayloadBytes(delta.size(), dtype)));
}
BENCHMARK(BM_EncodeDelta)->ArgsProduct({{1 << 10, 1 << 16}, {0, 1}});

void BM_DecodeDelta(benchmark::State& state) {
  const SparseDelta delta = RandomDelta(1 << 20, static_cast<size_t>(state.range(0)));
  const DeltaDtype dtype = state.range(1) ? DeltaDtype::kFp16 : DeltaDtype::kFp32;
  const Bytes bytes = EncodeDelta(delta, dtype);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DecodeDelta(bytes));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeDelta)->ArgsProduct({{1 << 10, 1 << 16}, {0, 1}});

void BM_QuantizeFp16(benchmark::State& state) {
  Rng rng(9);
  std::vector<float> values(1 << 16);
  for (float& v : values) v = static_cast<float>(10.0 * rng.Normal());
  for (auto _ : state) {
    benchmark::DoNotOptimize(QuantizeFp16(values));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(values.size()));
}
BENCHMARK(BM_QuantizeFp16);

}  // namespace
}  // namespace cloudadapt

BENCHMARK_MAIN();

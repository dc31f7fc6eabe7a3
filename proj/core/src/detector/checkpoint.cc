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

#include "cloudadapt/detector/checkpoint.h"

#include <string>
#include <vector>

#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/common/error.h"
#include "cloudadapt/common/fnv1a.h"
#include "common/json_fields.h"

namespace cloudadapt {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "cloudadapt.checkpoint";
constexpr const char* kManifest = "manifest.json";
constexpr const char* kParamsFile = "params.f32";
constexpr const char* kBnFile = "bn_state.f32";

template <typename T>
T Field(const json& j, const char* key) {
  return internal::RequireField<T>(j, key, "checkpoint manifest");
}

json ArchJson(const ArchConfig& a) {
  json j;
  j["preset_name"] = a.preset_name;
  j["input"] = {a.input_height, a.input_width, a.input_channels};
  j["family"] = a.family == ArchFamily::kPlain ? "plain" : "residual";
  json blocks = json::array();
  for (const ConvBlockSpec& b : a.conv_blocks) {
    blocks.push_back({{"filters", b.filters}, {"kernel", b.kernel}, {"pool", b.pool}});
  }
  j["conv_blocks"] = blocks;
  j["stem"] = {{"filters", a.stem.filters},
               {"kernel", a.stem.kernel},
               {"stride", a.stem.stride},
               {"pool", a.stem.pool}};
  j["block_kind"] = a.block_kind == ResidualBlockKind::kBasic ? "basic" : "bottleneck";
  json stages = json::array();
  for (const ResidualStageSpec& s : a.stages) {
    stages.push_back({{"blocks", s.blocks},
                      {"width", s.width},
                      {"out_channels", s.out_channels},
                      {"stride", s.stride}});
  }
  j["stages"] = stages;
  j["conv_bias"] = a.conv_bias;
  j["global_pool"] = a.global_pool;
  j["fc"] = a.fc;
  j["bn_epsilon"] = a.bn_epsilon;
  j["bn_momentum"] = a.bn_momentum;
  return j;
}

ArchConfig ArchFromJsonValue(const json& j) {
  ArchConfig a;
  a.preset_name = Field<std::string>(j, "preset_name");
  const auto input = Field<std::vector<int>>(j, "input");
  if (input.size() != 3) throw FormatError("checkpoint manifest: input must be [H, W, C]");
  a.input_height = input[0];
  a.input_width = input[1];
  a.input_channels = input[2];
  const auto family = Field<std::string>(j, "family");
  if (family == "plain") {
    a.family = ArchFamily::kPlain;
  } else if (family == "residual") {
    a.family = ArchFamily::kResidual;
  } else {
    throw FormatError("checkpoint manifest: unknown family '" + family + "'");
  }
  for (const json& b : Field<json>(j, "conv_blocks")) {
    a.conv_blocks.push_back(
        {Field<int>(b, "filters"), Field<int>(b, "kernel"), Field<int>(b, "pool")});
  }
  const json stem = Field<json>(j, "stem");
  a.stem = {Field<int>(stem, "filters"), Field<int>(stem, "kernel"), Field<int>(stem, "stride"),
            Field<int>(stem, "pool")};
  const auto kind = Field<std::string>(j, "block_kind");
  if (kind == "basic") {
    a.block_kind = ResidualBlockKind::kBasic;
  } else if (kind == "bottleneck") {
    a.block_kind = ResidualBlockKind::kBottleneck;
  } else {
    throw FormatError("checkpoint manifest: unknown block kind '" + kind + "'");
  }
  for (const json& s : Field<json>(j, "stages")) {
    a.stages.push_back({Field<int>(s, "blocks"), Field<int>(s, "width"),
                        Field<int>(s, "out_channels"), Field<int>(s, "stride")});
  }
  a.conv_bias = Field<bool>(j, "conv_bias");
  a.global_pool = Field<bool>(j, "global_pool");
  a.fc = Field<std::vector<int>>(j, "fc");
  a.bn_epsilon = Field<double>(j, "bn_epsilon");
  a.bn_momentum = Field<double>(j, "bn_momentum");
  try {
    a.Validate();
  } catch (const Error& e) {
    throw FormatError(std::string("checkpoint manifest: invalid architecture: ") + e.what());
  }
  return a;
}

json ParseManifest(const std::filesystem::path& dir) {
  const std::string text = ReadTextFile(dir / kManifest);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("checkpoint manifest: ") + e.what());
  }
}

}  // namespace

std::string ArchToJson(const ArchConfig& arch) { return ArchJson(arch).dump(2); }

ArchConfig ArchFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("architecture JSON: ") + e.what());
  }
  return ArchFromJsonValue(j);
}

void SaveCheckpoint(const DetectorModel& model, const std::filesystem::path& dir,
                    const std::string& provenance_json) {
  json provenance = nullptr;
  if (!provenance_json.empty()) {
    try {
      provenance = json::parse(provenance_json);
    } catch (const json::parse_error& e) {
      throw InvalidArgumentError(std::string("provenance is not JSON: ") + e.what());
    }
  }
  std::filesystem::create_directories(dir);

  Bytes params;
  AppendF32s(params, model.params());
  Bytes bn_bytes;
  json bn = json::array();
  for (const BnState& st : model.bn_states()) {
    AppendF32s(bn_bytes, st.running_mean);
    AppendF32s(bn_bytes, st.running_var);
    bn.push_back({{"channels", st.channels},
                  {"epsilon", st.epsilon},
                  {"momentum", st.momentum},
                  {"gamma_offset", st.gamma_offset},
                  {"beta_offset", st.beta_offset}});
  }

  json m;
  m["format"] = kFormatTag;
  m["version"] = kCheckpointFormatVersion;
  m["arch"] = ArchJson(model.arch());
  m["seed"] = model.seed();
  m["mode"] = StatsModeName(model.mode());
  m["num_params"] = model.num_params();
  m["dtype"] = "float32";
  m["byte_order"] = "little";
  m["params_file"] = kParamsFile;
  m["bn_file"] = kBnFile;
  m["params_fnv1a64"] = FingerprintFloats(model.params());
  m["bn_layers"] = bn;
  m["provenance"] = provenance;

  WriteFileBytes(dir / kParamsFile, params);
  WriteFileBytes(dir / kBnFile, bn_bytes);
  WriteTextFile(dir / kManifest, m.dump(2) + "\n");
}

DetectorModel LoadCheckpoint(const std::filesystem::path& dir) {
  const json m = ParseManifest(dir);
  if (Field<std::string>(m, "format") != kFormatTag) {
    throw FormatError("checkpoint manifest: not a checkpoint");
  }
  const int version = Field<int>(m, "version");
  if (version != kCheckpointFormatVersion) {
    throw FormatError("checkpoint manifest: unsupported version " + std::to_string(version));
  }
  if (Field<std::string>(m, "dtype") != "float32" ||
      Field<std::string>(m, "byte_order") != "little") {
    throw FormatError("checkpoint manifest: unsupported dtype or byte order");
  }
  const ArchConfig arch = ArchFromJsonValue(Field<json>(m, "arch"));
  DetectorModel model = BuildModel(arch, Field<uint64_t>(m, "seed"));
  try {
    model.set_mode(ParseStatsMode(Field<std::string>(m, "mode")));
  } catch (const InvalidArgumentError& e) {
    throw FormatError(std::string("checkpoint manifest: ") + e.what());
  }
  if (Field<size_t>(m, "num_params") != model.num_params()) {
    throw FormatError("checkpoint manifest: parameter count disagrees with the architecture");
  }

  const Bytes params = ReadFileBytes(dir / Field<std::string>(m, "params_file"));
  if (params.size() != model.num_params() * sizeof(float)) {
    throw FormatError("checkpoint: params file holds " + std::to_string(params.size()) +
                      " bytes, expected " + std::to_string(model.num_params() * sizeof(float)));
  }
  ByteReader pr(params);
  pr.ReadF32s(model.mutable_params());
  if (FingerprintFloats(model.params()) != Field<uint64_t>(m, "params_fnv1a64")) {
    throw FormatError("checkpoint: parameter fingerprint mismatch");
  }

  const json bn = Field<json>(m, "bn_layers");
  std::vector<BnState>& states = model.mutable_bn_states();
  if (!bn.is_array() || bn.size() != states.size()) {
    throw FormatError("checkpoint manifest: BN layer count disagrees with the architecture");
  }
  size_t expected = 0;
  for (const BnState& st : states) expected += 2 * sizeof(float) * st.channels;
  const Bytes bn_bytes = ReadFileBytes(dir / Field<std::string>(m, "bn_file"));
  if (bn_bytes.size() != expected) {
    throw FormatError("checkpoint: BN state file holds " + std::to_string(bn_bytes.size()) +
                      " bytes, expected " + std::to_string(expected));
  }
  ByteReader br(bn_bytes);
  for (size_t i = 0; i < states.size(); ++i) {
    BnState& st = states[i];
    const json& jl = bn[i];
    if (Field<int>(jl, "channels") != st.channels ||
        Field<size_t>(jl, "gamma_offset") != st.gamma_offset ||
        Field<size_t>(jl, "beta_offset") != st.beta_offset) {
      throw FormatError("checkpoint manifest: BN layer " + std::to_string(i) +
                        " layout disagrees with the architecture");
    }
    st.epsilon = Field<double>(jl, "epsilon");
    st.momentum = Field<double>(jl, "momentum");
    br.ReadF32s(st.running_mean);
    br.ReadF32s(st.running_var);
  }
  return model;
}

std::string LoadCheckpointProvenance(const std::filesystem::path& dir) {
  const json m = ParseManifest(dir);
  return m.contains("provenance") ? m["provenance"].dump() : "null";
}

}  // namespace cloudadapt

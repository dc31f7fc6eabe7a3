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

// Model checkpoint container: one directory holding
//
//   manifest.json  format tag and version, architecture, seed, stats mode,
//                  parameter count, per-BN-layer epsilon/momentum/offsets,
//                  FNV-1a-64 fingerprint of params.f32, optional provenance
//   params.f32     P little-endian float32 values in ParamIndexMap order
//   bn_state.f32   per BN layer: running_mean[C] then running_var[C]
//
// Save followed by Load reproduces the model bit-exactly, and saving the
// same model twice produces identical bytes.

#ifndef CLOUDADAPT_DETECTOR_CHECKPOINT_H_
#define CLOUDADAPT_DETECTOR_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "cloudadapt/detector/arch.h"
#include "cloudadapt/detector/model.h"

namespace cloudadapt {

inline constexpr int kCheckpointFormatVersion = 1;

// JSON text of an ArchConfig and its inverse. FormatError on bad input.
std::string ArchToJson(const ArchConfig& arch);
ArchConfig ArchFromJson(const std::string& text);

// `provenance_json`, if nonempty, must be a JSON document; it is embedded
// verbatim under "provenance" (typically the resolved run configuration).
void SaveCheckpoint(const DetectorModel& model, const std::filesystem::path& dir,
                    const std::string& provenance_json = "");

// Throws IoError for missing files and FormatError for a malformed manifest,
// unknown version, size mismatch or fingerprint mismatch.
DetectorModel LoadCheckpoint(const std::filesystem::path& dir);

// The embedded provenance document as JSON text, or "null".
std::string LoadCheckpointProvenance(const std::filesystem::path& dir);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DETECTOR_CHECKPOINT_H_

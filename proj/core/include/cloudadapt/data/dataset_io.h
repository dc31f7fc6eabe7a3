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

// Dataset container: one directory per dataset holding
//
//   manifest.json   UTF-8 JSON manifest (format, version, name, split,
//                   threshold, seed, count, height, width, channels, dtype,
//                   byte_order, layout, bands, labels, storage, file names)
//   pixels.f32      concatenated item tensors            (storage = concatenated)
//   item_NNNNN.f32  one tensor per item                  (storage = per_item)
//
// Tensors are raw little-endian float32 in row-major HWC order.

#ifndef CLOUDADAPT_DATA_DATASET_IO_H_
#define CLOUDADAPT_DATA_DATASET_IO_H_

#include <filesystem>

#include "cloudadapt/data/data_cube.h"

namespace cloudadapt {

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetManifestName = "manifest.json";

enum class DatasetStorage { kConcatenated, kPerItem };

// Writes `ds` into `dir`, creating it if needed. Existing container files in
// `dir` are overwritten.
void SaveDataset(const LabeledDataset& ds, const std::filesystem::path& dir,
                 DatasetStorage storage = DatasetStorage::kConcatenated);

// Throws FormatError on a malformed manifest, unknown version or a data file
// whose byte count disagrees with the manifest; IoError if files are missing.
LabeledDataset LoadDataset(const std::filesystem::path& dir);

}  // namespace cloudadapt

#endif  // CLOUDADAPT_DATA_DATASET_IO_H_

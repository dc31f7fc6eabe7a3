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

#include "cloudadapt/data/dataset_io.h"

#include <cstdio>
#include <string>

#include "cloudadapt/common/byte_io.h"
#include "cloudadapt/common/error.h"
#include "common/json_fields.h"

namespace cloudadapt {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "cloudadapt.dataset";
constexpr const char* kConcatenatedFile = "pixels.f32";

std::string ItemFileName(size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "item_%05zu.f32", i);
  return buf;
}

template <typename T>
T Require(const json& j, const char* key) {
  return internal::RequireField<T>(j, key, "dataset manifest");
}

}  // namespace

void SaveDataset(const LabeledDataset& ds, const std::filesystem::path& dir,
                 DatasetStorage storage) {
  ds.Validate();
  std::filesystem::create_directories(dir);

  json manifest;
  manifest["format"] = kFormatTag;
  manifest["version"] = kDatasetFormatVersion;
  manifest["name"] = ds.name;
  manifest["split"] = SplitName(ds.split);
  manifest["threshold"] = ds.threshold;
  manifest["seed"] = ds.seed;
  manifest["count"] = ds.items.size();
  manifest["dtype"] = "float32";
  manifest["byte_order"] = "little";
  manifest["layout"] = "HWC";

  const int h = ds.empty() ? 0 : ds.front_cube().height();
  const int w = ds.empty() ? 0 : ds.front_cube().width();
  const int c = ds.empty() ? 0 : ds.front_cube().channels();
  manifest["height"] = h;
  manifest["width"] = w;
  manifest["channels"] = c;

  json bands = json::array();
  if (!ds.empty()) {
    for (const auto& b : ds.front_cube().bands()) {
      json jb;
      jb["id"] = b.id;
      jb["wavelength_nm"] = b.wavelength_nm ? json(*b.wavelength_nm) : json(nullptr);
      bands.push_back(jb);
    }
  }
  manifest["bands"] = bands;

  json labels = json::array();
  for (const auto& item : ds.items) labels.push_back(item.label);
  manifest["labels"] = labels;

  if (storage == DatasetStorage::kConcatenated) {
    manifest["storage"] = "concatenated";
    manifest["data_file"] = kConcatenatedFile;
    Bytes bytes;
    bytes.reserve(ds.items.size() * static_cast<size_t>(h) * w * c * 4);
    for (const auto& item : ds.items) AppendF32s(bytes, item.cube.pixels());
    WriteFileBytes(dir / kConcatenatedFile, bytes);
  } else {
    manifest["storage"] = "per_item";
    json files = json::array();
    for (size_t i = 0; i < ds.items.size(); ++i) {
      const std::string name = ItemFileName(i);
      Bytes bytes;
      AppendF32s(bytes, ds.items[i].cube.pixels());
      WriteFileBytes(dir / name, bytes);
      files.push_back(name);
    }
    manifest["item_files"] = files;
  }
  WriteTextFile(dir / kDatasetManifestName, manifest.dump(2) + "\n");
}

LabeledDataset LoadDataset(const std::filesystem::path& dir) {
  const std::filesystem::path manifest_path = dir / kDatasetManifestName;
  if (!std::filesystem::exists(manifest_path)) {
    throw IoError("no dataset manifest at " + manifest_path.string());
  }
  json manifest;
  try {
    manifest = json::parse(ReadTextFile(manifest_path));
  } catch (const json::parse_error& e) {
    throw FormatError("dataset manifest is not valid JSON: " +
                      std::string(e.what()));
  }
  if (!manifest.is_object()) throw FormatError("dataset manifest is not an object");
  if (Require<std::string>(manifest, "format") != kFormatTag) {
    throw FormatError("not a cloudadapt dataset manifest");
  }
  const int version = Require<int>(manifest, "version");
  if (version != kDatasetFormatVersion) {
    throw FormatError("unknown dataset container version " +
                      std::to_string(version));
  }
  if (Require<std::string>(manifest, "dtype") != "float32" ||
      Require<std::string>(manifest, "byte_order") != "little" ||
      Require<std::string>(manifest, "layout") != "HWC") {
    throw FormatError("unsupported dtype, byte order or layout");
  }

  LabeledDataset ds;
  ds.name = Require<std::string>(manifest, "name");
  try {
    ds.split = ParseSplit(Require<std::string>(manifest, "split"));
  } catch (const InvalidArgumentError& e) {
    throw FormatError(e.what());
  }
  ds.threshold = Require<double>(manifest, "threshold");
  ds.seed = Require<uint64_t>(manifest, "seed");

  const size_t count = Require<size_t>(manifest, "count");
  const int h = Require<int>(manifest, "height");
  const int w = Require<int>(manifest, "width");
  const int c = Require<int>(manifest, "channels");
  const auto labels = Require<std::vector<int>>(manifest, "labels");
  if (labels.size() != count) {
    throw FormatError("manifest declares " + std::to_string(count) +
                      " items but lists " + std::to_string(labels.size()) +
                      " labels");
  }
  std::vector<BandDescriptor> bands;
  const json jbands = Require<json>(manifest, "bands");
  if (!jbands.is_array()) throw FormatError("'bands' must be an array");
  for (const auto& jb : jbands) {
    BandDescriptor b;
    b.id = Require<std::string>(jb, "id");
    if (jb.contains("wavelength_nm") && !jb["wavelength_nm"].is_null()) {
      b.wavelength_nm = Require<double>(jb, "wavelength_nm");
    }
    bands.push_back(std::move(b));
  }
  if (count == 0) return ds;
  if (h < 1 || w < 1 || c < 1 || static_cast<int>(bands.size()) != c) {
    throw FormatError("manifest geometry is inconsistent with its band list");
  }

  const size_t per_item = static_cast<size_t>(h) * w * c;
  auto make_item = [&](ByteReader& reader, size_t i) {
    std::vector<float> pixels(per_item);
    reader.ReadF32s(pixels);
    if (labels[i] != 0 && labels[i] != 1) {
      throw FormatError("label of item " + std::to_string(i) + " not in {0,1}");
    }
    try {
      ds.items.push_back({DataCube(h, w, bands, std::move(pixels)), labels[i]});
    } catch (const Error& e) {
      throw FormatError("item " + std::to_string(i) + ": " + e.what());
    }
  };

  const std::string storage = Require<std::string>(manifest, "storage");
  if (storage == "concatenated") {
    const Bytes bytes =
        ReadFileBytes(dir / Require<std::string>(manifest, "data_file"));
    if (bytes.size() != count * per_item * 4) {
      throw FormatError("data file holds " + std::to_string(bytes.size()) +
                        " bytes, manifest implies " +
                        std::to_string(count * per_item * 4));
    }
    ByteReader reader(bytes);
    for (size_t i = 0; i < count; ++i) make_item(reader, i);
  } else if (storage == "per_item") {
    const auto files = Require<std::vector<std::string>>(manifest, "item_files");
    if (files.size() != count) {
      throw FormatError("manifest lists " + std::to_string(files.size()) +
                        " item files for " + std::to_string(count) + " items");
    }
    for (size_t i = 0; i < count; ++i) {
      const Bytes bytes = ReadFileBytes(dir / files[i]);
      if (bytes.size() != per_item * 4) {
        throw FormatError("item file " + files[i] + " has wrong byte count");
      }
      ByteReader reader(bytes);
      make_item(reader, i);
    }
  } else {
    throw FormatError("unknown storage mode '" + storage + "'");
  }
  return ds;
}

}  // namespace cloudadapt

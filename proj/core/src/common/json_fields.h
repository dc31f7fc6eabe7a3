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

// JSON field access shared by the on-disk manifests. Not installed.

#ifndef CLOUDADAPT_COMMON_JSON_FIELDS_H_
#define CLOUDADAPT_COMMON_JSON_FIELDS_H_

#include <string>

#include "cloudadapt/common/error.h"
#include "json.hpp"

namespace cloudadapt::internal {

// Reads j[key] as T, raising FormatError tagged with `context` when the key
// is missing or holds the wrong type.
template <typename T>
T RequireField(const nlohmann::json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string(context) + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(context) + ": bad value for '" + key + "': " + e.what());
  }
}

}  // namespace cloudadapt::internal

#endif  // CLOUDADAPT_COMMON_JSON_FIELDS_H_

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

#include "cli_config.h"

#include <vector>

namespace cloudadapt::tools {
namespace {

using nlohmann::json;

std::string ScalarText(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

json TypedValue(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    size_t used = 0;
    const long long i = std::stoll(text, &used);
    if (used == text.size()) return i;
  } catch (const std::exception&) {
  }
  try {
    size_t used = 0;
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

bool Skipped(const std::string& name) { return name == "help" || name == "config"; }

}  // namespace

void MergeJsonConfig(CLI::App& app, const json& config) {
  if (!config.is_object()) return;
  const json* scoped = nullptr;
  if (config.contains(app.get_name()) && config[app.get_name()].is_object()) {
    scoped = &config[app.get_name()];
  }
  for (CLI::Option* opt : app.get_options()) {
    const std::string key = opt->get_single_name();
    if (Skipped(key) || opt->count() > 0) continue;
    const json* value = nullptr;
    if (scoped && scoped->contains(key)) {
      value = &(*scoped)[key];
    } else if (config.contains(key) && !config[key].is_object()) {
      value = &config[key];
    }
    if (!value) continue;
    if (value->is_array()) {
      for (const json& e : *value) opt->add_result(ScalarText(e));
    } else {
      opt->add_result(ScalarText(*value));
    }
    opt->run_callback();
  }
}

json ResolvedConfig(const CLI::App& app) {
  json out = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string key = opt->get_single_name();
    if (Skipped(key)) continue;
    if (opt->count() > 0) {
      const std::vector<std::string>& r = opt->results();
      if (opt->get_expected_max() > 1) {
        json arr = json::array();
        for (const std::string& s : r) arr.push_back(TypedValue(s));
        out[key] = arr;
      } else {
        out[key] = TypedValue(r.back());
      }
    } else {
      const std::string def = opt->get_default_str();
      if (def.empty()) {
        out[key] = nullptr;
      } else if (def.front() == '[') {
        json parsed = json::parse(def, nullptr, false);
        out[key] = parsed.is_discarded() ? json(def) : parsed;
      } else {
        out[key] = TypedValue(def);
      }
    }
  }
  return out;
}

}  // namespace cloudadapt::tools

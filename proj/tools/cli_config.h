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

// JSON configuration files and resolved-config echoes for CLI11 apps.

#ifndef CLOUDADAPT_TOOLS_CLI_CONFIG_H_
#define CLOUDADAPT_TOOLS_CLI_CONFIG_H_

#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace cloudadapt::tools {

// Fills every option of `app` that was not given on the command line from
// `config`. Keys are long option names without dashes ("n-per-split"). Keys
// under config[app.get_name()] take precedence over top-level keys; arrays
// feed vector options. Unknown keys are ignored so one file can serve
// several commands.
void MergeJsonConfig(CLI::App& app, const nlohmann::json& config);

// Every option of `app` with its effective value (command line, config file
// or default), as typed JSON where the text parses as a number or bool.
nlohmann::json ResolvedConfig(const CLI::App& app);

}  // namespace cloudadapt::tools

#endif  // CLOUDADAPT_TOOLS_CLI_CONFIG_H_

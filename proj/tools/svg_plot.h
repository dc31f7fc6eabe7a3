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

// Static SVG line charts for sweep results.

#ifndef CLOUDADAPT_TOOLS_SVG_PLOT_H_
#define CLOUDADAPT_TOOLS_SVG_PLOT_H_

#include <string>
#include <vector>

namespace cloudadapt::tools {

struct Series {
  std::string label;
  std::string color;  // CSS color
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double y_min = 0.0;
  double y_max = 100.0;
  std::vector<Series> series;
};

// Deterministic output: same chart, same bytes.
std::string RenderSvg(const Chart& chart);

}  // namespace cloudadapt::tools

#endif  // CLOUDADAPT_TOOLS_SVG_PLOT_H_

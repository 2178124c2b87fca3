// Copyright 2026 The efsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EFSIM_SVG_H
#define EFSIM_SVG_H

#include <string>
#include <vector>

/// Minimal static SVG charts. Output depends only on the inputs.
namespace efsim::svg {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    /// Markers only, no connecting line.
    bool scatter = false;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    /// Base-10 log scale on y; non-positive points are dropped.
    bool log_y = false;
    std::vector<Series> series;
};

std::string render(const LinePlot &plot);

struct Heatmap {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<std::string> x_ticks;
    std::vector<std::string> y_ticks;
    /// values[row][col]; rows follow y_ticks from bottom to top.
    std::vector<std::vector<double>> values;
    /// Optional per-cell outline: 1 green, 0 red, negative none.
    std::vector<std::vector<int>> flags;
};

std::string render(const Heatmap &map);

}  // namespace efsim::svg

#endif

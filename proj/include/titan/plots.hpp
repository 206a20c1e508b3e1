// Copyright 2026 The Titan Authors
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

#pragma once

#include <string>
#include <vector>

#include "titan/cfcsa.hpp"

namespace titan {

/// Diverging scale is symmetric about zero (magenta / white / green);
/// sequential runs white -> dark blue over [0, 1].
enum class ColorScale { DivergingGreenMagenta, SequentialBlue };

struct HeatmapSpec {
    std::string title;
    std::string legend;                  // units / sign convention note
    std::vector<std::string> row_labels; // one per grid row
    std::vector<std::string> col_labels; // one per grid column
    Grid values;
    ColorScale scale = ColorScale::DivergingGreenMagenta;
    double fixed_max = 0.0; // > 0 pins the color-scale maximum
};

std::string heatmap_svg(const HeatmapSpec& spec);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> y_low;  // optional +-sigma envelope
    std::vector<double> y_high;
};

struct LinePlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    bool log_x = false;
    bool log_y = false;
};

std::string line_plot_svg(const LinePlotSpec& spec);

} // namespace titan

//------------------------------------------------------------------------------
//
//   Copyright 2026 The FHNN Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace fhnn {

struct PlotSeries
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers_only = false; // scatter instead of a polyline
};

struct PlotPanel
{
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

// Panels laid out row-major in a grid of `columns`; returns SVG text.
std::string render_svg(const std::vector<PlotPanel>& panels, std::size_t columns = 1, double panel_width = 360,
                       double panel_height = 220);

void write_svg(const std::string& path, const std::vector<PlotPanel>& panels, std::size_t columns = 1);

} // namespace fhnn

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

#include "metrics/svg_plot.hpp"

#include "numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace fhnn {

namespace {

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void settle()
    {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

void panel_svg(std::string& out, const PlotPanel& p, double ox, double oy, double w, double h)
{
    const double left = ox + 48, right = ox + w - 12, top = oy + 24, bottom = oy + h - 34;
    Range xr, yr;
    for (const auto& s : p.series) {
        for (double v : s.x)
            xr.add(v);
        for (double v : s.y)
            yr.add(v);
    }
    xr.settle();
    yr.settle();
    auto px = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * (right - left); };
    auto py = [&](double v) { return bottom - (v - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

    out += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(right - left) + "\" height=\"" +
           fmt(bottom - top) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fmt(ox + w / 2) + "\" y=\"" + fmt(oy + 16) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + escape(p.title) + "</text>\n";
    out += "<text x=\"" + fmt((left + right) / 2) + "\" y=\"" + fmt(oy + h - 4) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + escape(p.x_label) + "</text>\n";
    out += "<text x=\"" + fmt(ox + 10) + "\" y=\"" + fmt((top + bottom) / 2) +
           "\" text-anchor=\"middle\" font-size=\"10\" transform=\"rotate(-90 " + fmt(ox + 10) + " " +
           fmt((top + bottom) / 2) + ")\">" + escape(p.y_label) + "</text>\n";
    for (int i = 0; i <= 2; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 2.0;
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 2.0;
        out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(bottom + 12) +
               "\" text-anchor=\"middle\" font-size=\"9\">" + tick(fx) + "</text>\n";
        out += "<text x=\"" + fmt(left - 4) + "\" y=\"" + fmt(py(fy) + 3) +
               "\" text-anchor=\"end\" font-size=\"9\">" + tick(fy) + "</text>\n";
    }
    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        const char* color = palette[k % std::size(palette)];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers_only) {
            for (std::size_t i = 0; i < n; ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                    out += "<circle cx=\"" + fmt(px(s.x[i])) + "\" cy=\"" + fmt(py(s.y[i])) +
                           "\" r=\"3\" fill=\"" + color + "\"/>\n";
        } else if (n > 0) {
            out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + std::string(color) + "\" points=\"";
            for (std::size_t i = 0; i < n; ++i)
                if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                    out += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
            out += "\"/>\n";
        }
        if (!s.label.empty())
            out += "<text x=\"" + fmt(right - 4) + "\" y=\"" + fmt(top + 12 + 11.0 * k) +
                   "\" text-anchor=\"end\" font-size=\"9\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
    }
}

} // namespace

std::string render_svg(const std::vector<PlotPanel>& panels, std::size_t columns, double pw, double ph)
{
    columns = std::max<std::size_t>(columns, 1);
    const std::size_t rows = (panels.size() + columns - 1) / columns;
    const double width = pw * static_cast<double>(columns);
    const double height = ph * static_cast<double>(std::max<std::size_t>(rows, 1));
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
                      fmt(height) + "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
        panel_svg(out, panels[i], pw * static_cast<double>(i % columns), ph * static_cast<double>(i / columns), pw,
                  ph);
    out += "</svg>\n";
    return out;
}

void write_svg(const std::string& path, const std::vector<PlotPanel>& panels, std::size_t columns)
{
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << render_svg(panels, columns)))
        throw IoError("cannot write '" + path + "'");
}

} // namespace fhnn

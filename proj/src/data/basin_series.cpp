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

#include "data/basin_series.hpp"

#include "numerics/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fhnn {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, const std::string& where)
{
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw DataError(where + ": non-numeric value '" + cell + "'");
    return v;
}

void append_number(std::string& out, double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

std::int64_t BasinSeries::step_seconds() const noexcept
{
    return timestamps.size() < 2 ? 0 : timestamps[1] - timestamps[0];
}

void BasinSeries::validate() const
{
    const std::size_t n = timestamps.size();
    if (n == 0)
        throw DataError("basin '" + basin_id + "' has no rows");
    if (drivers.rows() != n || response.size() != n || (sim_response && sim_response->size() != n))
        throw DataError("basin '" + basin_id + "': column lengths disagree");
    if (driver_names.size() != drivers.cols())
        throw DataError("basin '" + basin_id + "': driver names do not match driver columns");
    const std::int64_t step = step_seconds();
    if (n > 1 && step <= 0)
        throw DataError("basin '" + basin_id + "': timestamps are not strictly increasing");
    for (std::size_t i = 1; i < n; ++i)
        if (timestamps[i] - timestamps[i - 1] != step)
            throw DataError("basin '" + basin_id + "': non-uniform time step at row " + std::to_string(i + 1));
    if (!all_finite(drivers) || !all_finite(response) || (sim_response && !all_finite(*sim_response)))
        throw DataError("basin '" + basin_id + "': non-finite value");
}

BasinSeries read_basin_csv(const std::string& path, const std::string& basin_id)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw DataError(path + ": missing header row");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.front() != "timestamp")
        throw DataError(path + ": header must start with 'timestamp'");
    const bool has_sim = header.back() == "sim_flow";
    const std::size_t flow_col = header.size() - (has_sim ? 2 : 1);
    if (header[flow_col] != "flow")
        throw DataError(path + ": missing column 'flow'");
    const std::size_t d_x = flow_col - 1;

    BasinSeries series;
    series.basin_id = basin_id;
    series.driver_names.assign(header.begin() + 1, header.begin() + static_cast<std::ptrdiff_t>(flow_col));
    std::vector<double> drivers;
    std::vector<double> sim;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(where + ": expected " + std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
        Timestamp t = 0;
        try {
            t = parse_timestamp(cells[0]);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        if (!series.timestamps.empty()) {
            const std::int64_t step = series.timestamps.size() > 1
                                          ? series.timestamps[1] - series.timestamps[0]
                                          : t - series.timestamps.back();
            if (t - series.timestamps.back() != step || step <= 0)
                throw DataError(where + ": non-uniform time step at " + cells[0] + " (expected " +
                                std::to_string(step) + " s after the previous row)");
        }
        series.timestamps.push_back(t);
        for (std::size_t j = 0; j < d_x; ++j)
            drivers.push_back(parse_cell(cells[1 + j], where));
        series.response.push_back(parse_cell(cells[flow_col], where));
        if (has_sim)
            sim.push_back(parse_cell(cells[flow_col + 1], where));
    }
    series.drivers = Matrix(series.timestamps.size(), d_x, std::move(drivers));
    if (has_sim)
        series.sim_response = std::move(sim);
    series.validate();
    return series;
}

void write_basin_csv(const std::string& path, const BasinSeries& series)
{
    series.validate();
    std::string out = "timestamp";
    for (const auto& name : series.driver_names)
        out += "," + name;
    out += ",flow";
    if (series.sim_response)
        out += ",sim_flow";
    out += '\n';
    for (std::size_t i = 0; i < series.length(); ++i) {
        out += format_timestamp(series.timestamps[i]);
        for (double v : series.drivers.row(i)) {
            out += ',';
            append_number(out, v);
        }
        out += ',';
        append_number(out, series.response[i]);
        if (series.sim_response) {
            out += ',';
            append_number(out, (*series.sim_response)[i]);
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << out))
        throw IoError("cannot write '" + path + "'");
}

} // namespace fhnn

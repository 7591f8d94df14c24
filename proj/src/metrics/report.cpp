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

#include "metrics/report.hpp"

#include "data/basin_series.hpp"
#include "metrics/nse.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

namespace fhnn {

namespace {

constexpr const char* report_header = "basin_id,horizon,n_windows,n_skipped,nse_windowed,nse_pooled,runoff_ratio";

std::string number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

template <class T>
T parse(const std::string& s, const std::string& where)
{
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError(where + ": bad value '" + s + "'");
    return v;
}

const ReportRow& aggregate(const EvalReport& r, const char* id, std::size_t horizon)
{
    for (const auto& row : r.aggregates)
        if (row.basin_id == id && (horizon == 0 || row.horizon == horizon))
            return row;
    throw DataError(std::string("report has no ") + id + " row");
}

} // namespace

double EvalReport::mean_nse(std::size_t horizon) const
{
    return aggregate(*this, "__mean__", horizon).nse_windowed;
}

double EvalReport::median_nse(std::size_t horizon) const
{
    return aggregate(*this, "__median__", horizon).nse_windowed;
}

EvalReport summarize(std::vector<ReportRow> rows)
{
    if (rows.empty())
        throw DataError("cannot summarize an empty report");
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return a.horizon != b.horizon ? a.horizon < b.horizon : a.basin_id < b.basin_id;
    });
    EvalReport report;
    std::map<std::size_t, std::vector<const ReportRow*>> by_horizon;
    for (const auto& row : rows)
        by_horizon[row.horizon].push_back(&row);
    for (const auto& [h, group] : by_horizon) {
        ReportRow mean{"__mean__", h, 0, 0, 0, 0, 0};
        ReportRow median{"__median__", h, 0, 0, 0, 0, 0};
        std::vector<double> w, p, rr;
        for (const auto* row : group) {
            mean.n_windows += row->n_windows;
            mean.n_skipped += row->n_skipped;
            w.push_back(row->nse_windowed);
            p.push_back(row->nse_pooled);
            rr.push_back(row->runoff_ratio);
        }
        median.n_windows = mean.n_windows;
        median.n_skipped = mean.n_skipped;
        mean.nse_windowed = mean_of(w);
        mean.nse_pooled = mean_of(p);
        mean.runoff_ratio = mean_of(rr);
        median.nse_windowed = median_of(w);
        median.nse_pooled = median_of(p);
        median.runoff_ratio = median_of(rr);
        report.aggregates.push_back(mean);
        report.aggregates.push_back(median);
    }
    report.rows = std::move(rows);
    return report;
}

void write_report(const std::string& path, const EvalReport& report)
{
    std::string out = report_header;
    out += '\n';
    auto emit = [&](const ReportRow& r) {
        out += r.basin_id + ',' + std::to_string(r.horizon) + ',' + std::to_string(r.n_windows) + ',' +
               std::to_string(r.n_skipped) + ',' + number(r.nse_windowed) + ',' + number(r.nse_pooled) + ',' +
               number(r.runoff_ratio) + '\n';
    };
    for (const auto& r : report.rows)
        emit(r);
    for (const auto& r : report.aggregates)
        emit(r);
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << out))
        throw IoError("cannot write '" + path + "'");
}

EvalReport read_report(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open report '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != report_header)
        throw DataError(path + ": unexpected report header");
    EvalReport report;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const std::string where = path + ":" + std::to_string(line_no);
        const auto c = split_csv_line(line);
        if (c.size() != 7)
            throw DataError(where + ": expected 7 columns");
        ReportRow r{c[0],
                    parse<std::size_t>(c[1], where),
                    parse<std::size_t>(c[2], where),
                    parse<std::size_t>(c[3], where),
                    parse<double>(c[4], where),
                    parse<double>(c[5], where),
                    parse<double>(c[6], where)};
        if (r.basin_id == "__mean__" || r.basin_id == "__median__")
            report.aggregates.push_back(std::move(r));
        else
            report.rows.push_back(std::move(r));
    }
    return report;
}

void export_states(const LatentState& state, const std::string& path)
{
    std::string out = "scale,step_index,original_time_index,mean_hidden_value\n";
    auto emit = [&](const char* scale, const Matrix& traj, const std::vector<std::size_t>& index) {
        for (std::size_t i = 0; i < traj.rows(); ++i) {
            double sum = 0.0;
            for (double v : traj.row(i))
                sum += v;
            const double mean = traj.cols() ? sum / static_cast<double>(traj.cols()) : 0.0;
            out += std::string(scale) + ',' + std::to_string(i) + ',' + std::to_string(index.at(i)) + ',' +
                   number(mean) + '\n';
        }
    };
    emit("fast", state.fast, state.fast_index);
    emit("medium", state.medium, state.medium_index);
    emit("slow", state.slow, state.slow_index);
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << out))
        throw IoError("cannot write '" + path + "'");
}

} // namespace fhnn

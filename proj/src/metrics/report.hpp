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

#include "model/fhnn_model.hpp"

#include <string>
#include <vector>

namespace fhnn {

struct ReportRow
{
    std::string basin_id;
    std::size_t horizon = 0;
    std::size_t n_windows = 0;
    std::size_t n_skipped = 0;
    double nse_windowed = 0.0;
    double nse_pooled = 0.0;
    double runoff_ratio = 0.0;

    bool operator==(const ReportRow&) const = default;
};

/// Per-basin rows plus, per horizon, `__mean__` and `__median__` aggregate
/// rows (n_windows / n_skipped summed, other columns aggregated).
struct EvalReport
{
    std::vector<ReportRow> rows;
    std::vector<ReportRow> aggregates;

    // Windowed NSE aggregate for `horizon` (the first horizon when 0).
    double mean_nse(std::size_t horizon = 0) const;
    double median_nse(std::size_t horizon = 0) const;

    bool operator==(const EvalReport&) const = default;
};

// Throws DataError on empty input.
EvalReport summarize(std::vector<ReportRow> rows);

void write_report(const std::string& path, const EvalReport& report);
EvalReport read_report(const std::string& path);

// Rows `scale,step_index,original_time_index,mean_hidden_value`, scales in
// order fast, medium, slow.
void export_states(const LatentState& state, const std::string& path);

} // namespace fhnn

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

#include "data/timestamp.hpp"
#include "numerics/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhnn {

/// One basin's aligned record: drivers (one column per forcing), observed
/// flow and optionally a simulated flow from a process model.
struct BasinSeries
{
    std::string basin_id;
    std::vector<Timestamp> timestamps;
    std::vector<std::string> driver_names;
    Matrix drivers; // length x d_x
    std::vector<double> response;
    std::optional<std::vector<double>> sim_response;

    std::size_t length() const noexcept { return timestamps.size(); }
    std::size_t driver_count() const noexcept { return drivers.cols(); }
    // Seconds between consecutive rows; zero for a single-row series.
    std::int64_t step_seconds() const noexcept;

    // Throws DataError when lengths disagree, the step is not uniform or a
    // value is not finite.
    void validate() const;
};

// Header `timestamp,<drivers...>,flow[,sim_flow]`. Errors name the file and
// the 1-based line number.
BasinSeries read_basin_csv(const std::string& path, const std::string& basin_id);
void write_basin_csv(const std::string& path, const BasinSeries& series);

// Splits one CSV record; no quoting support (the schema is numeric).
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace fhnn

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

#include "data/basin_series.hpp"
#include "data/windows.hpp"
#include "numerics/errors.hpp"

#include <span>
#include <vector>

namespace fhnn {

// Raised when the observations have no variance.
struct UndefinedNseError : NumericError
{
    using NumericError::NumericError;
};

// 1 - sum((sim - obs)^2) / sum((obs - mean)^2).
double nse(std::span<const double> obs, std::span<const double> sim);

struct WindowedNse
{
    double value = 0.0;        // mean over scorable windows
    std::size_t n_windows = 0; // scored
    std::size_t n_skipped = 0; // constant observations
};

// One NSE per forecast window, averaged. Throws UndefinedNseError when no
// window is scorable.
WindowedNse windowed_nse(const std::vector<std::vector<double>>& obs, const std::vector<std::vector<double>>& sim);
// NSE over all windows' steps concatenated.
double pooled_nse(const std::vector<std::vector<double>>& obs, const std::vector<std::vector<double>>& sim);

// sum(flow) / sum(precip) over `range`; precip is the driver named "precip"
// (the first driver when none is).
double runoff_ratio(const BasinSeries& series, const IndexRange& range);

double mean_of(std::span<const double> values);
double median_of(std::vector<double> values);

// Spearman rank correlation (average ranks for ties).
double rank_correlation(std::span<const double> a, std::span<const double> b);

} // namespace fhnn

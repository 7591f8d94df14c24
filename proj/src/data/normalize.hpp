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
#include "numerics/checkpoint.hpp"

#include <span>
#include <vector>

namespace fhnn {

/// Z-score statistics fitted on a training range. A feature with zero
/// spread is flagged constant and passed through unscaled.
struct NormStats
{
    struct Feature
    {
        double mean = 0.0;
        double std = 1.0;
        bool constant = false;

        double apply(double v) const noexcept { return constant ? v : (v - mean) / std; }
        double invert(double v) const noexcept { return constant ? v : v * std + mean; }
    };

    std::vector<Feature> drivers;
    Feature response;

    Metadata to_metadata(const std::string& prefix = "norm.") const;
    static NormStats from_metadata(const Metadata& meta, const std::string& prefix = "norm.");
};

NormStats::Feature fit_feature(std::span<const double> values);

// Fits on rows of `range`. The response statistics come from sim_response
// when `use_sim` is set.
NormStats fit_norm(const BasinSeries& series, const IndexRange& range, bool use_sim = false);

// Normalized copy of drivers, response and sim_response (both flows share
// the response statistics).
BasinSeries apply_norm(const BasinSeries& series, const NormStats& stats);

std::vector<double> invert_response(std::span<const double> values, const NormStats& stats);

} // namespace fhnn

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
#include "data/manifest.hpp"
#include "synth/catchment.hpp"
#include "synth/weather.hpp"

#include <string>
#include <vector>

namespace fhnn {

/// Climate and catchment character of a regime, in per-day units.
struct RegimeProfile
{
    WeatherConfig weather;
    CatchmentParams catchment;
};

// Position 0 is wet and flashy, 1 is dry and snow dominated; intermediate
// positions interpolate.
RegimeProfile regime_profile(double position);
// Accepts wet-flashy, wet-mixed, moderate, dry-mixed, dry-snowy (hyphen or
// underscore). Throws ConfigError otherwise.
double regime_position(const std::string& regime);

// Per-day rates rescaled to a step of 1/steps_per_year years.
RegimeProfile rescale_profile(const RegimeProfile& daily, std::size_t steps_per_year);

// Multiplies each rate by 1 +/- relative (sign drawn per parameter) and
// shifts t_snow by +/- 4*relative degC. Zero relative returns params unchanged.
CatchmentParams perturb_params(const CatchmentParams& params, double relative, std::uint64_t seed);

struct FleetConfig
{
    std::size_t n_basins = 6;
    std::size_t years = 10;
    std::string regime = "gradient"; // or a named regime
    double perturbation = 0.25;      // relative error of the simulation parameters
    double jitter = 0.1;             // per-basin spread of the truth parameters
    std::size_t steps_per_year = 1460;
    std::size_t spinup_years = 1;
    std::size_t train_years = 6;
    std::size_t val_years = 2;
    int start_year = 2000;
    std::uint64_t seed = 7;

    void validate() const;
};

struct FleetBasin
{
    BasinSeries series; // response from truth params, sim_response from perturbed
    CatchmentParams truth;
    CatchmentParams perturbed;
    double regime_position = 0.0;
    double runoff_ratio = 0.0; // sum(flow) / sum(precip) over the stored record
};

struct Fleet
{
    std::vector<FleetBasin> basins;
    SplitSpec split;
};

Fleet make_fleet(const FleetConfig& cfg);

// Writes one CSV per basin plus manifest.txt into `dir`; returns the
// manifest path.
std::string write_fleet(const std::string& dir, const Fleet& fleet);

// Seconds per step for a 365-day synthetic year.
std::int64_t step_seconds_for(std::size_t steps_per_year);

} // namespace fhnn

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

#include "numerics/matrix.hpp"

#include <cstddef>
#include <cstdint>

namespace fhnn {

/// Stochastic forcing: a seasonal temperature sinusoid with Gaussian noise
/// and intermittent precipitation (Bernoulli occurrence times a gamma depth).
struct WeatherConfig
{
    std::size_t steps_per_year = 1460;
    double temp_mean = 8.0;       // degC
    double temp_amplitude = 12.0; // degC; coldest at the start of each year
    double temp_noise = 2.0;      // degC
    double precip_prob = 0.3;     // wet-step probability
    double precip_shape = 0.8;    // gamma shape
    double precip_scale = 2.5;    // gamma scale, mm per step
    std::uint64_t seed = 0;

    void validate() const;
    double expected_precip() const noexcept { return precip_prob * precip_shape * precip_scale; }
};

// Columns: precip (mm/step), temp (degC).
Matrix generate_weather(std::size_t n_steps, const WeatherConfig& cfg);

} // namespace fhnn

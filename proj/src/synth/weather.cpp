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

#include "synth/weather.hpp"

#include "numerics/errors.hpp"
#include "numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fhnn {

void WeatherConfig::validate() const
{
    if (steps_per_year == 0)
        throw ConfigError("weather steps_per_year must be positive");
    if (!(precip_prob >= 0.0 && precip_prob <= 1.0))
        throw ConfigError("weather precip_prob must lie in [0, 1]");
    if (!(precip_shape > 0.0) || !(precip_scale >= 0.0) || !(temp_noise >= 0.0))
        throw ConfigError("weather gamma parameters and noise must be nonnegative (shape positive)");
}

Matrix generate_weather(std::size_t n_steps, const WeatherConfig& cfg)
{
    cfg.validate();
    if (n_steps == 0)
        throw ConfigError("weather needs at least one step");
    Rng temp_rng(derive_seed(cfg.seed, 0));
    Rng wet_rng(derive_seed(cfg.seed, 1));
    Rng depth_rng(derive_seed(cfg.seed, 2));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::gamma_distribution<double> depth(cfg.precip_shape, 1.0);

    Matrix out(n_steps, 2);
    const double omega = 2.0 * std::numbers::pi / static_cast<double>(cfg.steps_per_year);
    for (std::size_t t = 0; t < n_steps; ++t) {
        const double season = -std::cos(omega * static_cast<double>(t));
        const double eps = noise(temp_rng);
        out(t, 1) = cfg.temp_mean + cfg.temp_amplitude * season + cfg.temp_noise * eps;
        const bool wet = unit(wet_rng) < cfg.precip_prob;
        const double d = depth(depth_rng);
        out(t, 0) = wet ? cfg.precip_scale * d : 0.0;
    }
    return out;
}

} // namespace fhnn

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

#include "synth/catchment.hpp"

#include "numerics/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fhnn {

void CatchmentParams::validate() const
{
    const double values[] = {ddf, soil_cap, et_coeff, frac_fast, k_fast, k_slow};
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError("catchment parameters must be finite and nonnegative");
    if (!std::isfinite(t_snow))
        throw ConfigError("catchment t_snow must be finite");
    if (frac_fast > 1.0)
        throw ConfigError("catchment frac_fast must lie in [0, 1]");
    if (!(k_fast <= 1.0 && k_slow > 0.0 && k_fast > k_slow))
        throw ConfigError("catchment rates need 0 < k_slow < k_fast <= 1");
}

SimulationResult simulate(const Matrix& drivers, const CatchmentParams& p, const CatchmentStores& init)
{
    p.validate();
    if (drivers.cols() != 2)
        throw ShapeError("simulate expects drivers (precip, temp), got " + drivers.shape_string());
    if (init.snow < 0 || init.soil < 0 || init.fast < 0 || init.slow < 0)
        throw ConfigError("initial stores must be nonnegative");
    const std::size_t n = drivers.rows();
    SimulationResult r;
    r.flow.resize(n);
    r.et.resize(n);
    r.stores = Matrix(n, 4);
    r.initial = init;
    CatchmentStores s = init;
    for (std::size_t t = 0; t < n; ++t) {
        const double precip = drivers(t, 0);
        const double temp = drivers(t, 1);
        if (precip < 0.0)
            throw DataError("negative precipitation at step " + std::to_string(t));
        const bool cold = temp <= p.t_snow;
        const double snowfall = cold ? precip : 0.0;
        const double rain = precip - snowfall;
        s.snow += snowfall;
        const double melt = std::min(s.snow, p.ddf * std::max(temp - p.t_snow, 0.0));
        s.snow -= melt;
        s.soil += rain + melt;
        const double overflow = std::max(s.soil - p.soil_cap, 0.0);
        s.soil -= overflow;
        const double et = std::min(s.soil, p.et_coeff * std::max(temp, 0.0) * s.soil);
        s.soil -= et;
        s.fast += p.frac_fast * overflow;
        s.slow += (1.0 - p.frac_fast) * overflow;
        const double q_fast = p.k_fast * s.fast;
        const double q_slow = p.k_slow * s.slow;
        s.fast -= q_fast;
        s.slow -= q_slow;
        r.flow[t] = q_fast + q_slow;
        r.et[t] = et;
        r.stores(t, 0) = s.snow;
        r.stores(t, 1) = s.soil;
        r.stores(t, 2) = s.fast;
        r.stores(t, 3) = s.slow;
    }
    r.final = s;
    return r;
}

} // namespace fhnn

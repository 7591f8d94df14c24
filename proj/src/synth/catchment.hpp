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

#include <vector>

namespace fhnn {

/// Degree-day snow store, threshold soil store and two linear reservoirs.
/// Rates are per simulation step.
struct CatchmentParams
{
    double ddf = 3.0;        // melt, mm per degC per step
    double t_snow = 0.0;     // degC; precipitation at or below falls as snow
    double soil_cap = 150.0; // mm
    double et_coeff = 0.002; // fraction of soil water lost per degC above zero
    double frac_fast = 0.5;  // share of soil overflow routed to the fast store
    double k_fast = 0.4;     // outflow fraction per step
    double k_slow = 0.02;

    void validate() const;
};

struct CatchmentStores
{
    double snow = 0.0;
    double soil = 0.0;
    double fast = 0.0;
    double slow = 0.0;

    double total() const noexcept { return snow + soil + fast + slow; }
};

struct SimulationResult
{
    std::vector<double> flow;
    std::vector<double> et;
    Matrix stores; // per step after the update: snow, soil, fast, slow
    CatchmentStores initial;
    CatchmentStores final;
};

// drivers columns: precip (mm/step), temp (degC).
SimulationResult simulate(const Matrix& drivers, const CatchmentParams& params, const CatchmentStores& init = {});

} // namespace fhnn

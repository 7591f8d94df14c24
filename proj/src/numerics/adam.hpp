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

#include "numerics/param_set.hpp"

#include <cstddef>
#include <vector>

namespace fhnn {

struct AdamState
{
    std::size_t step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<Matrix> m;
    std::vector<Matrix> v;

    // Zero moments shaped after `params`.
    static AdamState for_params(const ParamSet& params, double lr = 1e-3, double beta1 = 0.9,
                                double beta2 = 0.999, double eps = 1e-8);
};

// One bias-corrected Adam update. Gradients are read, not cleared.
void adam_step(ParamSet& params, AdamState& state);

} // namespace fhnn

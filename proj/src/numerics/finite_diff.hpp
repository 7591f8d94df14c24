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

#include <functional>
#include <vector>

namespace fhnn {

using LossFn = std::function<double(const ParamSet&)>;

/// Central-difference gradient of `loss` with respect to every scalar in
/// `params`. Each entry is perturbed in place and restored bit-exactly.
std::vector<Matrix> finite_diff_grad(const LossFn& loss, ParamSet& params, double eps);

struct GradCheck
{
    double max_rel_error = 0.0; // over entries whose magnitude reaches abs_tol
    double max_abs_error = 0.0;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;

    bool passed() const noexcept { return failures == 0; }
};

// An entry passes when |a-n| <= rel_tol*max(|a|,|n|) or |a-n| <= abs_tol.
GradCheck compare_gradients(const ParamSet& analytic, const std::vector<Matrix>& numeric,
                            double rel_tol, double abs_tol = 1e-8);

} // namespace fhnn

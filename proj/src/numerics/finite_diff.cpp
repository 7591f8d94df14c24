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

#include "numerics/finite_diff.hpp"

#include "numerics/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fhnn {

std::vector<Matrix> finite_diff_grad(const LossFn& loss, ParamSet& params, double eps)
{
    if (!(eps > 0.0))
        throw ConfigError("finite_diff_grad: eps must be positive");

    std::vector<Matrix> grads;
    grads.reserve(params.size());
    for (auto& p : params) {
        Matrix g(p.value.rows(), p.value.cols());
        for (std::size_t j = 0; j < p.value.size(); ++j) {
            const double saved = p.value[j];
            p.value[j] = saved + eps;
            const double up = loss(params);
            p.value[j] = saved - eps;
            const double down = loss(params);
            p.value[j] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw NumericError("finite_diff_grad: non-finite loss perturbing '" + p.name + "'[" +
                                   std::to_string(j) + "]");
            g[j] = (up - down) / (2.0 * eps);
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

GradCheck compare_gradients(const ParamSet& analytic, const std::vector<Matrix>& numeric,
                            double rel_tol, double abs_tol)
{
    if (numeric.size() != analytic.size())
        throw ShapeError("compare_gradients: parameter count mismatch");
    GradCheck result;
    double worst_score = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const Matrix& a = analytic[i].grad;
        const Matrix& n = numeric[i];
        if (!a.same_shape(n))
            throw ShapeError("compare_gradients: shape mismatch for '" + analytic[i].name + "'");
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double scale = std::max(std::abs(a[j]), std::abs(n[j]));
            const double diff = std::abs(a[j] - n[j]);
            ++result.checked;
            result.max_abs_error = std::max(result.max_abs_error, diff);
            const double rel = scale > 0.0 ? diff / scale : 0.0;
            if (scale >= abs_tol)
                result.max_rel_error = std::max(result.max_rel_error, rel);
            const bool ok = diff <= rel_tol * scale || diff <= abs_tol;
            if (!ok)
                ++result.failures;
            // Track the entry closest to (or furthest past) failing.
            const double score = std::min(rel / rel_tol, diff / abs_tol);
            if (score > worst_score) {
                worst_score = score;
                result.worst_param = analytic[i].name;
                result.worst_index = j;
                result.analytic = a[j];
                result.numeric = n[j];
            }
        }
    }
    return result;
}

} // namespace fhnn

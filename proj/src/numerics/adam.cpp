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

#include "numerics/adam.hpp"

#include "numerics/errors.hpp"

#include <cmath>

namespace fhnn {

AdamState AdamState::for_params(const ParamSet& params, double lr, double beta1, double beta2, double eps)
{
    AdamState s;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    for (const auto& p : params) {
        s.m.emplace_back(p.value.rows(), p.value.cols());
        s.v.emplace_back(p.value.rows(), p.value.cols());
    }
    return s;
}

void adam_step(ParamSet& params, AdamState& state)
{
    if (state.m.size() != params.size() || state.v.size() != params.size())
        throw ShapeError("adam_step: optimizer state has " + std::to_string(state.m.size()) +
                         " entries, parameter set has " + std::to_string(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!state.m[i].same_shape(params[i].value) || !state.v[i].same_shape(params[i].value))
            throw ShapeError("adam_step: moment shape " + state.m[i].shape_string() +
                             " does not match parameter '" + params[i].name + "' " +
                             params[i].value.shape_string());
    if (!(state.lr > 0.0) || !(state.beta1 > 0.0 && state.beta1 < 1.0) ||
        !(state.beta2 > 0.0 && state.beta2 < 1.0))
        throw ConfigError("adam_step: invalid hyperparameters");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(state.beta1, t);
    const double correction2 = 1.0 - std::pow(state.beta2, t);

    for (std::size_t i = 0; i < params.size(); ++i) {
        auto value = params[i].value.values();
        auto grad = params[i].grad.values();
        auto m = state.m[i].values();
        auto v = state.v[i].values();
        for (std::size_t j = 0; j < value.size(); ++j) {
            const double g = grad[j];
            if (!std::isfinite(g))
                throw NumericError("adam_step: non-finite gradient in '" + params[i].name + "'");
            m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g;
            v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[j] / correction1;
            const double v_hat = v[j] / correction2;
            value[j] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

} // namespace fhnn

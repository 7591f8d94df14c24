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

#include "numerics/param_set.hpp"

#include "numerics/errors.hpp"

#include <cmath>

namespace fhnn {

std::size_t ParamSet::add(std::string name, Matrix value)
{
    if (find(name))
        throw ConfigError("duplicate parameter name '" + name + "'");
    require_finite(value, "parameter '" + name + "'");
    Matrix grad(value.rows(), value.cols());
    params_.push_back({std::move(name), std::move(value), std::move(grad)});
    return params_.size() - 1;
}

std::optional<std::size_t> ParamSet::find(const std::string& name) const
{
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t ParamSet::index_of(const std::string& name) const
{
    if (auto i = find(name))
        return *i;
    throw ConfigError("unknown parameter '" + name + "'");
}

void ParamSet::zero_grad()
{
    for (auto& p : params_)
        p.grad.fill(0.0);
}

double ParamSet::grad_norm() const
{
    double sum = 0.0;
    for (const auto& p : params_)
        for (double g : p.grad.values())
            sum += g * g;
    return std::sqrt(sum);
}

void ParamSet::scale_grad(double factor)
{
    for (auto& p : params_)
        for (double& g : p.grad.values())
            g *= factor;
}

double ParamSet::clip_grad_norm(double max_norm)
{
    const double norm = grad_norm();
    if (!std::isfinite(norm))
        throw NumericError("gradient norm is not finite");
    if (max_norm > 0.0 && norm > max_norm)
        scale_grad(max_norm / norm);
    return norm;
}

std::size_t ParamSet::scalar_count() const
{
    std::size_t n = 0;
    for (const auto& p : params_)
        n += p.value.size();
    return n;
}

bool ParamSet::same_layout(const ParamSet& other) const
{
    if (params_.size() != other.params_.size())
        return false;
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name != other.params_[i].name ||
            !params_[i].value.same_shape(other.params_[i].value))
            return false;
    return true;
}

bool ParamSet::values_equal(const ParamSet& other) const
{
    if (!same_layout(other))
        return false;
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].value != other.params_[i].value)
            return false;
    return true;
}

} // namespace fhnn

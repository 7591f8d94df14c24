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
#include <optional>
#include <string>
#include <vector>

namespace fhnn {

struct Param
{
    std::string name;
    Matrix value;
    Matrix grad;
};

/// Named parameters with gradients stored alongside. Insertion order is the
/// iteration order used by checkpoints and optimizer state.
class ParamSet
{
public:
    std::size_t add(std::string name, Matrix value);

    std::size_t size() const noexcept { return params_.size(); }
    Param& operator[](std::size_t i) { return params_[i]; }
    const Param& operator[](std::size_t i) const { return params_[i]; }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t index_of(const std::string& name) const;

    auto begin() noexcept { return params_.begin(); }
    auto end() noexcept { return params_.end(); }
    auto begin() const noexcept { return params_.begin(); }
    auto end() const noexcept { return params_.end(); }

    void zero_grad();
    double grad_norm() const;
    void scale_grad(double factor);
    // Rescales gradients so their global L2 norm is at most max_norm. Returns the norm before clipping.
    double clip_grad_norm(double max_norm);

    std::size_t scalar_count() const;
    // Same names and shapes in the same order.
    bool same_layout(const ParamSet& other) const;
    bool values_equal(const ParamSet& other) const;

private:
    std::vector<Param> params_;
};

} // namespace fhnn

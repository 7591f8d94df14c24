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
#include "numerics/rng.hpp"

#include <span>
#include <string>
#include <vector>

namespace fhnn {

/// y = w * x + b, with w: out x in, b: out x 1.
struct DenseLayer
{
    std::size_t w = 0;
    std::size_t b = 0;
    std::size_t input_size = 0;
    std::size_t output_size = 0;

    static DenseLayer add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                          std::size_t output_size, Rng& rng);
    static DenseLayer bind(const ParamSet& params, const std::string& prefix);
    void validate(const ParamSet& params) const;
};

std::vector<double> dense_forward(std::span<const double> x, const ParamSet& params, const DenseLayer& layer);
// Accumulates dW, db; returns dL/dx.
std::vector<double> dense_backward(std::span<const double> dy, std::span<const double> x, ParamSet& params,
                                   const DenseLayer& layer);

/// One tanh hidden layer, linear output: w2 * tanh(w1 * x + b1) + b2.
struct MlpLayer
{
    DenseLayer hidden;
    DenseLayer output;

    static MlpLayer add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                        std::size_t hidden_size, std::size_t output_size, Rng& rng);
    static MlpLayer bind(const ParamSet& params, const std::string& prefix);
};

struct MlpCache
{
    std::vector<double> x;
    std::vector<double> act; // tanh(w1 x + b1)
};

std::vector<double> mlp_forward(std::span<const double> x, const ParamSet& params, const MlpLayer& layer,
                                MlpCache* cache = nullptr);
std::vector<double> mlp_backward(std::span<const double> dy, const MlpCache& cache, ParamSet& params,
                                 const MlpLayer& layer);

} // namespace fhnn

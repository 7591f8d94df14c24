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

#include "recurrent/mlp.hpp"

#include "numerics/errors.hpp"

#include <cmath>

namespace fhnn {

DenseLayer DenseLayer::add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                           std::size_t output_size, Rng& rng)
{
    if (input_size == 0 || output_size == 0)
        throw ConfigError("dense layer '" + prefix + "' needs nonzero sizes");
    const double bound = 1.0 / std::sqrt(static_cast<double>(input_size));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(output_size, input_size);
    for (double& v : w.values())
        v = dist(rng);
    DenseLayer layer;
    layer.input_size = input_size;
    layer.output_size = output_size;
    layer.w = params.add(prefix + ".w", std::move(w));
    layer.b = params.add(prefix + ".b", Matrix(output_size, 1));
    return layer;
}

DenseLayer DenseLayer::bind(const ParamSet& params, const std::string& prefix)
{
    DenseLayer layer;
    layer.w = params.index_of(prefix + ".w");
    layer.b = params.index_of(prefix + ".b");
    layer.output_size = params[layer.w].value.rows();
    layer.input_size = params[layer.w].value.cols();
    layer.validate(params);
    return layer;
}

void DenseLayer::validate(const ParamSet& params) const
{
    const Matrix& w_m = params[w].value;
    const Matrix& b_m = params[b].value;
    if (w_m.rows() != output_size || w_m.cols() != input_size || b_m.rows() != output_size || b_m.cols() != 1)
        throw ShapeError("dense layer '" + params[w].name + "' has shape " + w_m.shape_string() + " / " +
                         b_m.shape_string());
}

std::vector<double> dense_forward(std::span<const double> x, const ParamSet& params, const DenseLayer& layer)
{
    if (x.size() != layer.input_size)
        throw ShapeError("dense_forward: input length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(layer.input_size));
    const Matrix& w = params[layer.w].value;
    const Matrix& b = params[layer.b].value;
    std::vector<double> y(layer.output_size);
    for (std::size_t r = 0; r < layer.output_size; ++r) {
        double a = b[r];
        const double* wr = w.data() + r * layer.input_size;
        for (std::size_t j = 0; j < layer.input_size; ++j)
            a += wr[j] * x[j];
        y[r] = a;
    }
    return y;
}

std::vector<double> dense_backward(std::span<const double> dy, std::span<const double> x, ParamSet& params,
                                   const DenseLayer& layer)
{
    if (dy.size() != layer.output_size || x.size() != layer.input_size)
        throw ShapeError("dense_backward: gradient or cached input has the wrong length");
    const Matrix& w = params[layer.w].value;
    Matrix& gw = params[layer.w].grad;
    Matrix& gb = params[layer.b].grad;
    std::vector<double> dx(layer.input_size, 0.0);
    for (std::size_t r = 0; r < layer.output_size; ++r) {
        const double d = dy[r];
        gb[r] += d;
        const double* wr = w.data() + r * layer.input_size;
        double* gr = gw.data() + r * layer.input_size;
        for (std::size_t j = 0; j < layer.input_size; ++j) {
            gr[j] += d * x[j];
            dx[j] += d * wr[j];
        }
    }
    return dx;
}

MlpLayer MlpLayer::add(ParamSet& params, const std::string& prefix, std::size_t input_size, std::size_t hidden_size,
                       std::size_t output_size, Rng& rng)
{
    return {DenseLayer::add(params, prefix + ".l1", input_size, hidden_size, rng),
            DenseLayer::add(params, prefix + ".l2", hidden_size, output_size, rng)};
}

MlpLayer MlpLayer::bind(const ParamSet& params, const std::string& prefix)
{
    MlpLayer layer{DenseLayer::bind(params, prefix + ".l1"), DenseLayer::bind(params, prefix + ".l2")};
    if (layer.hidden.output_size != layer.output.input_size)
        throw ShapeError("MLP '" + prefix + "': hidden width mismatch");
    return layer;
}

std::vector<double> mlp_forward(std::span<const double> x, const ParamSet& params, const MlpLayer& layer,
                                MlpCache* cache)
{
    std::vector<double> act = dense_forward(x, params, layer.hidden);
    for (double& a : act)
        a = std::tanh(a);
    std::vector<double> y = dense_forward(act, params, layer.output);
    if (cache) {
        cache->x.assign(x.begin(), x.end());
        cache->act = std::move(act);
    }
    return y;
}

std::vector<double> mlp_backward(std::span<const double> dy, const MlpCache& cache, ParamSet& params,
                                 const MlpLayer& layer)
{
    std::vector<double> d_act = dense_backward(dy, cache.act, params, layer.output);
    for (std::size_t k = 0; k < d_act.size(); ++k)
        d_act[k] *= 1.0 - cache.act[k] * cache.act[k];
    return dense_backward(d_act, cache.x, params, layer.hidden);
}

} // namespace fhnn

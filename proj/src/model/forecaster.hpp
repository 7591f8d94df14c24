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

#include "model/model_config.hpp"
#include "model/window.hpp"
#include "numerics/param_set.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fhnn {

/// Common surface of FHNN and the LSTM baselines: predict K steps from one
/// window, and accumulate the MSE gradient for it.
class Forecaster
{
public:
    virtual ~Forecaster() = default;

    const ModelConfig& config() const noexcept { return cfg_; }
    ParamSet& params() noexcept { return params_; }
    const ParamSet& params() const noexcept { return params_; }

    virtual std::vector<double> predict(const Window& window) const = 0;

    // Adds weight * d(mse)/d(params) into the gradient buffers and returns the
    // unweighted window MSE.
    virtual double accumulate_gradient(const Window& window, double weight) = 0;

    virtual std::unique_ptr<Forecaster> clone() const = 0;

protected:
    Forecaster(ModelConfig cfg, ParamSet params) : cfg_(std::move(cfg)), params_(std::move(params)) {}

    void check_window(const Window& window) const;

    ModelConfig cfg_;
    ParamSet params_;
};

// Fresh, randomly initialised forecaster of cfg.kind.
std::unique_ptr<Forecaster> make_forecaster(const ModelConfig& cfg, std::uint64_t seed);
// Wraps existing parameters; the dimension chain is validated against cfg.
std::unique_ptr<Forecaster> make_forecaster(const ModelConfig& cfg, ParamSet params);

// Mean squared error over the horizon.
double mse_loss(std::span<const double> y_hat, std::span<const double> y);

} // namespace fhnn

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

#include "model/forecaster.hpp"
#include "recurrent/lstm.hpp"
#include "recurrent/mlp.hpp"

namespace fhnn {

/// Drivers only: one LSTM over the T+K driver steps, linear head on the last K.
class LstmBaseline final : public Forecaster
{
public:
    LstmBaseline(const ModelConfig& cfg, std::uint64_t seed);
    LstmBaseline(const ModelConfig& cfg, ParamSet params);

    std::vector<double> predict(const Window& window) const override;
    double accumulate_gradient(const Window& window, double weight) override;
    std::unique_ptr<Forecaster> clone() const override { return std::make_unique<LstmBaseline>(*this); }

private:
    LstmSequence run(const Window& window, std::vector<double>& y_hat) const;

    LstmLayer lstm_;
    DenseLayer head_;
};

/// Autoregressive LSTM: step t consumes [x_t; y_{t-1}] for t = 1 .. T+K-1.
/// History steps use observed y; over the horizon the previous prediction is
/// fed back (y_{T-1} seeds step T), or the observed value under teacher forcing.
class LstmArBaseline final : public Forecaster
{
public:
    LstmArBaseline(const ModelConfig& cfg, std::uint64_t seed);
    LstmArBaseline(const ModelConfig& cfg, ParamSet params);

    // Always free-running; teacher forcing only shapes the training gradient.
    std::vector<double> predict(const Window& window) const override;
    // Horizon inputs replaced by the observed y_fcst.
    std::vector<double> predict_teacher_forced(const Window& window) const;
    double accumulate_gradient(const Window& window, double weight) override;
    std::unique_ptr<Forecaster> clone() const override { return std::make_unique<LstmArBaseline>(*this); }

private:
    LstmSequence run(const Window& window, std::vector<double>& y_hat, bool teacher) const;

    LstmLayer lstm_;
    DenseLayer head_;
};

} // namespace fhnn

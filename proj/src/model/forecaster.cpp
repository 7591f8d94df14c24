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

#include "model/forecaster.hpp"

#include "model/baselines.hpp"
#include "model/fhnn_model.hpp"
#include "numerics/errors.hpp"

namespace fhnn {

void Forecaster::check_window(const Window& w) const
{
    const auto expect = [](const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
        if (m.rows() != rows || m.cols() != cols)
            throw ShapeError(std::string("window ") + what + " has shape " + m.shape_string() + ", expected (" +
                             std::to_string(rows) + "x" + std::to_string(cols) + ")");
    };
    expect(w.x_hist, cfg_.input_length, cfg_.d_x, "x_hist");
    expect(w.y_hist, cfg_.input_length, 1, "y_hist");
    expect(w.x_fcst, cfg_.horizon, cfg_.d_x, "x_fcst");
    expect(w.y_fcst, cfg_.horizon, 1, "y_fcst");
}

std::unique_ptr<Forecaster> make_forecaster(const ModelConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    switch (cfg.kind) {
    case ModelKind::fhnn:
    case ModelKind::fhnn_single: return std::make_unique<FhnnModel>(cfg, seed);
    case ModelKind::lstm: return std::make_unique<LstmBaseline>(cfg, seed);
    case ModelKind::lstm_ar: return std::make_unique<LstmArBaseline>(cfg, seed);
    }
    throw ConfigError("unsupported model kind");
}

std::unique_ptr<Forecaster> make_forecaster(const ModelConfig& cfg, ParamSet params)
{
    cfg.validate();
    switch (cfg.kind) {
    case ModelKind::fhnn:
    case ModelKind::fhnn_single: return std::make_unique<FhnnModel>(cfg, std::move(params));
    case ModelKind::lstm: return std::make_unique<LstmBaseline>(cfg, std::move(params));
    case ModelKind::lstm_ar: return std::make_unique<LstmArBaseline>(cfg, std::move(params));
    }
    throw ConfigError("unsupported model kind");
}

double mse_loss(std::span<const double> y_hat, std::span<const double> y)
{
    if (y_hat.size() != y.size())
        throw ShapeError("mse_loss: length " + std::to_string(y_hat.size()) + " vs " + std::to_string(y.size()));
    if (y.empty())
        throw ShapeError("mse_loss: empty horizon");
    double sum = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double e = y_hat[k] - y[k];
        sum += e * e;
    }
    return sum / static_cast<double>(y.size());
}

} // namespace fhnn

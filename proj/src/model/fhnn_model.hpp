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
#include "recurrent/bilstm.hpp"
#include "recurrent/mlp.hpp"

#include <optional>

namespace fhnn {

// Chronological indices kept by stride-k subsampling anchored at the last
// step: T-1, T-1-k, ... (returned oldest first). Length is ceil(T/k).
std::vector<std::size_t> downsample_indices(std::size_t length, std::size_t stride);
Matrix downsample(const Matrix& rows, std::size_t stride);

/// Encoder output. Trajectories hold the per-step fwd+bwd summed hiddens of
/// each scale; *_index maps each row back to its original time step.
struct LatentState
{
    std::vector<double> z;
    Matrix fast;
    Matrix medium;
    Matrix slow;
    std::vector<std::size_t> fast_index;
    std::vector<std::size_t> medium_index;
    std::vector<std::size_t> slow_index;
};

/// Three-scale factorized encoder feeding a latent-initialised decoder.
/// The fhnn_single kind keeps only the fast scale.
class FhnnModel final : public Forecaster
{
public:
    FhnnModel(const ModelConfig& cfg, std::uint64_t seed);
    FhnnModel(const ModelConfig& cfg, ParamSet params);

    struct EncoderCache
    {
        BiLstmOutput fast;
        std::optional<BiLstmOutput> medium;
        std::optional<BiLstmOutput> slow;
        std::vector<std::size_t> medium_index;  // original steps
        std::vector<std::size_t> slow_index;    // original steps
        std::vector<std::size_t> slow_from_medium; // medium row feeding each slow tick
        MlpCache mlp;
    };

    LatentState encode(const Matrix& x_hist, const Matrix& y_hist, EncoderCache* cache = nullptr) const;
    std::vector<double> decode(std::span<const double> z, const Matrix& x_fcst,
                               LstmSequence* cache = nullptr) const;

    std::vector<double> predict(const Window& window) const override;
    double accumulate_gradient(const Window& window, double weight) override;
    std::unique_ptr<Forecaster> clone() const override { return std::make_unique<FhnnModel>(*this); }

    bool single_scale() const noexcept { return cfg_.kind == ModelKind::fhnn_single; }

private:
    void bind_layers();

    BiLstmLayer fast_;
    BiLstmLayer medium_;
    BiLstmLayer slow_;
    MlpLayer latent_;
    LstmLayer decoder_;
    DenseLayer head_;
};

} // namespace fhnn

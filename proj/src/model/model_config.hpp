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

#include "numerics/checkpoint.hpp"

#include <cstddef>
#include <string>

namespace fhnn {

enum class ModelKind { fhnn, fhnn_single, lstm, lstm_ar };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Architecture hyperparameters. Baselines use d_z as their LSTM width so
/// every forecaster shares the decoder's capacity.
struct ModelConfig
{
    ModelKind kind = ModelKind::fhnn;
    std::size_t d_x = 2;             // driver dimension (plus basin one-hot in global mode)
    std::size_t h_enc = 11;          // per-scale encoder width
    std::size_t m = 4;               // medium stride
    std::size_t s = 28;              // slow stride
    std::size_t d_z = 32;            // latent size = decoder width
    std::size_t mlp_hidden = 32;     // latent MLP hidden layer
    std::size_t input_length = 720;  // T
    std::size_t horizon = 28;        // K
    bool z_to_cell = false;          // also seed the decoder cell state with z
    bool teacher_forcing = false;    // LSTM-AR: feed observed y over the horizon

    void validate() const;
    Metadata to_metadata() const;
    static ModelConfig from_metadata(const Metadata& meta);
};

} // namespace fhnn

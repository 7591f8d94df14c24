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

#include "recurrent/lstm.hpp"

namespace fhnn {

struct BiLstmLayer
{
    LstmLayer fwd;
    LstmLayer bwd;

    static BiLstmLayer add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                           std::size_t hidden_size, Rng& rng);
    static BiLstmLayer bind(const ParamSet& params, const std::string& prefix);
    std::size_t hidden_size() const noexcept { return fwd.hidden_size; }
};

struct BiLstmOutput
{
    LstmSequence fwd;   // over xs in order
    LstmSequence bwd;   // over xs reversed
    Matrix h_fwd;       // T x H, row t = forward hidden after x_t
    Matrix h_bwd;       // T x H, row t = backward hidden after x_t (x_{T-1} seen first)
    std::vector<double> embedding; // h_fwd[T-1] + h_bwd[0]

    std::size_t steps() const noexcept { return h_fwd.rows(); }
    Matrix summed() const; // h_fwd + h_bwd per step
};

BiLstmOutput bilstm_embed(const Matrix& xs, const ParamSet& params, const BiLstmLayer& layer);

// Gradients may target the per-step hiddens of either direction (T x H,
// empty Matrix for none) and/or the embedding (empty span for none).
// Returns dL/dxs.
Matrix bilstm_backward(const BiLstmOutput& out, const Matrix& dh_fwd, const Matrix& dh_bwd,
                       std::span<const double> d_embedding, ParamSet& params, const BiLstmLayer& layer);

} // namespace fhnn

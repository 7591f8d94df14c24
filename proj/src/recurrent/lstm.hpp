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
#include "numerics/param_set.hpp"
#include "numerics/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fhnn {

/// An LSTM's weights inside a ParamSet. Gate row blocks are ordered
/// [input, forget, candidate, output]:
///   w_ih: 4H x D_in, w_hh: 4H x H, b: 4H x 1.
struct LstmLayer
{
    std::size_t w_ih = 0;
    std::size_t w_hh = 0;
    std::size_t b = 0;
    std::size_t input_size = 0;
    std::size_t hidden_size = 0;

    // Registers "<prefix>.w_ih", "<prefix>.w_hh", "<prefix>.b". Weights are
    // uniform in [-1/sqrt(H), 1/sqrt(H)]; forget-gate bias starts at 1.
    static LstmLayer add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                         std::size_t hidden_size, Rng& rng);
    // Rebinds to existing entries (e.g. after loading a checkpoint).
    static LstmLayer bind(const ParamSet& params, const std::string& prefix);

    void validate(const ParamSet& params) const;
};

struct LstmState
{
    std::vector<double> h;
    std::vector<double> c;

    static LstmState zeros(std::size_t hidden_size) { return {std::vector<double>(hidden_size), std::vector<double>(hidden_size)}; }
};

struct LstmStepCache
{
    std::vector<double> x;
    std::vector<double> h_prev;
    std::vector<double> c_prev;
    std::vector<double> gates; // activated i, f, g, o
    std::vector<double> c;
    std::vector<double> tanh_c;
};

struct LstmStep
{
    LstmState next;
    LstmStepCache cache;
};

struct LstmCellGrad
{
    std::vector<double> dx;
    std::vector<double> dh_prev;
    std::vector<double> dc_prev;
};

LstmStep lstm_cell_forward(std::span<const double> x, const LstmState& prev, const ParamSet& params,
                           const LstmLayer& layer);

// Parameter gradients are accumulated into params[*].grad.
LstmCellGrad lstm_cell_backward(std::span<const double> dh, std::span<const double> dc,
                                const LstmStepCache& cache, ParamSet& params, const LstmLayer& layer);

/// Left-to-right unroll. Row t of xs is the input at step t.
struct LstmSequence
{
    Matrix xs;     // T x D
    Matrix h;      // (T+1) x H, row 0 is the initial state
    Matrix c;      // (T+1) x H
    Matrix gates;  // T x 4H
    Matrix tanh_c; // T x H

    std::size_t steps() const noexcept { return xs.rows(); }
    std::span<const double> hidden(std::size_t t) const { return h.row(t + 1); }
    std::span<const double> cell(std::size_t t) const { return c.row(t + 1); }
    LstmState final_state() const;
    Matrix hiddens() const; // T x H
};

LstmSequence lstm_sequence(const Matrix& xs, const LstmState& init, const ParamSet& params,
                           const LstmLayer& layer);

// Incremental unroll for inputs that depend on earlier outputs: allocate,
// fill seq.xs row t, then advance step t.
LstmSequence lstm_sequence_alloc(std::size_t steps, const LstmState& init, const LstmLayer& layer);
void lstm_sequence_advance(LstmSequence& seq, std::size_t t, const ParamSet& params, const LstmLayer& layer);

// Backward through a single step t of a recorded sequence. dh/dc are the
// total gradients arriving at (h_t, c_t); writes dx (D), dh_prev, dc_prev (H).
void lstm_step_backward(const LstmSequence& seq, std::size_t t, std::span<const double> dh,
                        std::span<const double> dc, ParamSet& params, const LstmLayer& layer,
                        std::span<double> dx, std::span<double> dh_prev, std::span<double> dc_prev);

struct LstmSequenceGrad
{
    Matrix dxs; // T x D
    LstmState d_init;
};

// dh_steps (T x H) holds per-step gradients on h_t; pass an empty Matrix when
// only the final state receives gradient. dh_final/dc_final may be empty.
LstmSequenceGrad lstm_sequence_backward(const LstmSequence& seq, const Matrix& dh_steps,
                                        std::span<const double> dh_final, std::span<const double> dc_final,
                                        ParamSet& params, const LstmLayer& layer);

} // namespace fhnn

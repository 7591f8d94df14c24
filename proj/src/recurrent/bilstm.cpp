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

#include "recurrent/bilstm.hpp"

#include "numerics/errors.hpp"

namespace fhnn {

namespace {

Matrix reversed_rows(const Matrix& m)
{
    Matrix out(m.rows(), m.cols());
    for (std::size_t t = 0; t < m.rows(); ++t) {
        const auto src = m.row(m.rows() - 1 - t);
        std::copy(src.begin(), src.end(), out.row(t).begin());
    }
    return out;
}

} // namespace

BiLstmLayer BiLstmLayer::add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                             std::size_t hidden_size, Rng& rng)
{
    BiLstmLayer layer;
    layer.fwd = LstmLayer::add(params, prefix + ".fwd", input_size, hidden_size, rng);
    layer.bwd = LstmLayer::add(params, prefix + ".bwd", input_size, hidden_size, rng);
    return layer;
}

BiLstmLayer BiLstmLayer::bind(const ParamSet& params, const std::string& prefix)
{
    BiLstmLayer layer{LstmLayer::bind(params, prefix + ".fwd"), LstmLayer::bind(params, prefix + ".bwd")};
    if (layer.fwd.hidden_size != layer.bwd.hidden_size || layer.fwd.input_size != layer.bwd.input_size)
        throw ShapeError("BiLSTM '" + prefix + "': forward and backward directions disagree on shape");
    return layer;
}

Matrix BiLstmOutput::summed() const
{
    Matrix out = h_fwd;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += h_bwd[i];
    return out;
}

BiLstmOutput bilstm_embed(const Matrix& xs, const ParamSet& params, const BiLstmLayer& layer)
{
    if (layer.fwd.hidden_size != layer.bwd.hidden_size)
        throw ShapeError("bilstm_embed: hidden size " + std::to_string(layer.fwd.hidden_size) +
                         " (fwd) != " + std::to_string(layer.bwd.hidden_size) + " (bwd)");
    if (xs.rows() == 0)
        throw ShapeError("bilstm_embed: empty input sequence");
    const std::size_t H = layer.hidden_size();
    const std::size_t T = xs.rows();

    BiLstmOutput out{lstm_sequence(xs, LstmState::zeros(H), params, layer.fwd),
                     lstm_sequence(reversed_rows(xs), LstmState::zeros(H), params, layer.bwd),
                     Matrix(),
                     Matrix(T, H),
                     std::vector<double>(H)};
    out.h_fwd = out.fwd.hiddens();
    for (std::size_t t = 0; t < T; ++t) {
        const auto src = out.bwd.hidden(T - 1 - t);
        std::copy(src.begin(), src.end(), out.h_bwd.row(t).begin());
    }
    for (std::size_t k = 0; k < H; ++k)
        out.embedding[k] = out.h_fwd(T - 1, k) + out.h_bwd(0, k);
    return out;
}

Matrix bilstm_backward(const BiLstmOutput& out, const Matrix& dh_fwd, const Matrix& dh_bwd,
                       std::span<const double> d_embedding, ParamSet& params, const BiLstmLayer& layer)
{
    const std::size_t T = out.steps();
    const std::size_t H = layer.hidden_size();
    const auto check = [&](const Matrix& m, const char* what) {
        if (!m.empty() && (m.rows() != T || m.cols() != H))
            throw ShapeError(std::string("bilstm_backward: ") + what + " has shape " + m.shape_string());
    };
    check(dh_fwd, "dh_fwd");
    check(dh_bwd, "dh_bwd");
    if (!d_embedding.empty() && d_embedding.size() != H)
        throw ShapeError("bilstm_backward: embedding gradient length mismatch");

    // Backward direction processes time in reverse; realign its per-step grads.
    Matrix dh_bwd_seq;
    if (!dh_bwd.empty())
        dh_bwd_seq = reversed_rows(dh_bwd);

    auto g_fwd = lstm_sequence_backward(out.fwd, dh_fwd, d_embedding, {}, params, layer.fwd);
    auto g_bwd = lstm_sequence_backward(out.bwd, dh_bwd_seq, d_embedding, {}, params, layer.bwd);

    Matrix dxs = std::move(g_fwd.dxs);
    for (std::size_t t = 0; t < T; ++t) {
        const auto src = g_bwd.dxs.row(T - 1 - t);
        auto dst = dxs.row(t);
        for (std::size_t j = 0; j < dst.size(); ++j)
            dst[j] += src[j];
    }
    return dxs;
}

} // namespace fhnn

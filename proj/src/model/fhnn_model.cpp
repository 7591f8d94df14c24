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

#include "model/fhnn_model.hpp"

#include "numerics/errors.hpp"

#include <algorithm>

namespace fhnn {

std::vector<std::size_t> downsample_indices(std::size_t length, std::size_t stride)
{
    if (stride < 1)
        throw ConfigError("downsample: stride must be >= 1");
    if (length == 0)
        throw ShapeError("downsample: empty sequence");
    std::vector<std::size_t> idx;
    idx.reserve((length + stride - 1) / stride);
    for (std::size_t back = 0; back < length; back += stride)
        idx.push_back(length - 1 - back);
    std::reverse(idx.begin(), idx.end());
    return idx;
}

Matrix downsample(const Matrix& rows, std::size_t stride)
{
    const auto idx = downsample_indices(rows.rows(), stride);
    Matrix out(idx.size(), rows.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto src = rows.row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

namespace {

// Latest medium tick at or before `t`; the earliest tick when none precedes it.
std::size_t aligned_medium_row(const std::vector<std::size_t>& medium_index, std::size_t t)
{
    std::size_t row = 0;
    for (std::size_t i = 0; i < medium_index.size() && medium_index[i] <= t; ++i)
        row = i;
    return row;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& idx)
{
    Matrix out(idx.size(), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto src = m.row(idx[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

void add_into(std::span<double> dst, std::span<const double> src)
{
    for (std::size_t j = 0; j < dst.size(); ++j)
        dst[j] += src[j];
}

} // namespace

FhnnModel::FhnnModel(const ModelConfig& cfg, std::uint64_t seed) : Forecaster(cfg, ParamSet{})
{
    cfg_.validate();
    Rng rng(seed);
    const std::size_t H = cfg_.h_enc;
    BiLstmLayer::add(params_, "enc.fast", cfg_.d_x + 1, H, rng);
    if (!single_scale()) {
        BiLstmLayer::add(params_, "enc.medium", H, H, rng);
        BiLstmLayer::add(params_, "enc.slow", 2 * H, H, rng);
    }
    MlpLayer::add(params_, "enc.latent", single_scale() ? H : 3 * H, cfg_.mlp_hidden, cfg_.d_z, rng);
    LstmLayer::add(params_, "dec.lstm", cfg_.d_x, cfg_.d_z, rng);
    DenseLayer::add(params_, "dec.head", cfg_.d_z, 1, rng);
    bind_layers();
}

FhnnModel::FhnnModel(const ModelConfig& cfg, ParamSet params) : Forecaster(cfg, std::move(params))
{
    cfg_.validate();
    bind_layers();
}

void FhnnModel::bind_layers()
{
    const std::size_t H = cfg_.h_enc;
    const auto expect = [](bool ok, const std::string& what) {
        if (!ok)
            throw ShapeError("FHNN parameters do not match config: " + what);
    };
    fast_ = BiLstmLayer::bind(params_, "enc.fast");
    expect(fast_.fwd.input_size == cfg_.d_x + 1 && fast_.hidden_size() == H, "enc.fast");
    std::size_t expected = 6 + 4 + 3 + 2;
    if (!single_scale()) {
        medium_ = BiLstmLayer::bind(params_, "enc.medium");
        slow_ = BiLstmLayer::bind(params_, "enc.slow");
        expect(medium_.fwd.input_size == H && medium_.hidden_size() == H, "enc.medium");
        expect(slow_.fwd.input_size == 2 * H && slow_.hidden_size() == H, "enc.slow");
        expected += 12;
    }
    latent_ = MlpLayer::bind(params_, "enc.latent");
    expect(latent_.hidden.input_size == (single_scale() ? H : 3 * H) &&
               latent_.hidden.output_size == cfg_.mlp_hidden && latent_.output.output_size == cfg_.d_z,
           "enc.latent");
    decoder_ = LstmLayer::bind(params_, "dec.lstm");
    expect(decoder_.input_size == cfg_.d_x && decoder_.hidden_size == cfg_.d_z, "dec.lstm");
    head_ = DenseLayer::bind(params_, "dec.head");
    expect(head_.input_size == cfg_.d_z && head_.output_size == 1, "dec.head");
    expect(params_.size() == expected, "unexpected parameter count " + std::to_string(params_.size()));
}

LatentState FhnnModel::encode(const Matrix& x_hist, const Matrix& y_hist, EncoderCache* cache) const
{
    const std::size_t T = x_hist.rows();
    if (T == 0 || y_hist.rows() != T || y_hist.cols() != 1 || x_hist.cols() != cfg_.d_x)
        throw ShapeError("encode: history shapes " + x_hist.shape_string() + " / " + y_hist.shape_string());
    if (!single_scale() && T < cfg_.s)
        throw ShapeError("encode: history of " + std::to_string(T) + " steps is shorter than slow stride " +
                         std::to_string(cfg_.s));
    const std::size_t H = cfg_.h_enc;

    Matrix input(T, cfg_.d_x + 1);
    for (std::size_t t = 0; t < T; ++t) {
        auto row = input.row(t);
        const auto x = x_hist.row(t);
        std::copy(x.begin(), x.end(), row.begin());
        row[cfg_.d_x] = y_hist(t, 0);
    }

    EncoderCache local;
    EncoderCache& c = cache ? *cache : local;
    LatentState state;

    c.fast = bilstm_embed(input, params_, fast_);
    state.fast = c.fast.summed();
    state.fast_index.resize(T);
    for (std::size_t t = 0; t < T; ++t)
        state.fast_index[t] = t;

    std::vector<double> mlp_in;
    if (single_scale()) {
        mlp_in = c.fast.embedding;
    } else {
        c.medium_index = downsample_indices(T, cfg_.m);
        c.medium = bilstm_embed(gather_rows(state.fast, c.medium_index), params_, medium_);
        state.medium = c.medium->summed();

        c.slow_index = downsample_indices(T, cfg_.s);
        c.slow_from_medium.resize(c.slow_index.size());
        Matrix slow_in(c.slow_index.size(), 2 * H);
        for (std::size_t i = 0; i < c.slow_index.size(); ++i) {
            const std::size_t mrow = aligned_medium_row(c.medium_index, c.slow_index[i]);
            c.slow_from_medium[i] = mrow;
            auto row = slow_in.row(i);
            const auto med = state.medium.row(mrow);
            const auto fast = state.fast.row(c.slow_index[i]);
            std::copy(med.begin(), med.end(), row.begin());
            std::copy(fast.begin(), fast.end(), row.begin() + static_cast<std::ptrdiff_t>(H));
        }
        c.slow = bilstm_embed(slow_in, params_, slow_);
        state.slow = c.slow->summed();
        state.medium_index = c.medium_index;
        state.slow_index = c.slow_index;

        mlp_in.reserve(3 * H);
        mlp_in.insert(mlp_in.end(), c.slow->embedding.begin(), c.slow->embedding.end());
        mlp_in.insert(mlp_in.end(), c.medium->embedding.begin(), c.medium->embedding.end());
        mlp_in.insert(mlp_in.end(), c.fast.embedding.begin(), c.fast.embedding.end());
    }
    state.z = mlp_forward(mlp_in, params_, latent_, &c.mlp);
    return state;
}

std::vector<double> FhnnModel::decode(std::span<const double> z, const Matrix& x_fcst, LstmSequence* cache) const
{
    if (z.size() != cfg_.d_z)
        throw ShapeError("decode: latent length " + std::to_string(z.size()) + ", decoder width " +
                         std::to_string(cfg_.d_z));
    if (x_fcst.rows() == 0)
        throw ShapeError("decode: forecast horizon is empty");
    LstmState init = LstmState::zeros(cfg_.d_z);
    init.h.assign(z.begin(), z.end());
    if (cfg_.z_to_cell)
        init.c.assign(z.begin(), z.end());

    LstmSequence seq = lstm_sequence(x_fcst, init, params_, decoder_);
    std::vector<double> y_hat(x_fcst.rows());
    for (std::size_t k = 0; k < y_hat.size(); ++k)
        y_hat[k] = dense_forward(seq.hidden(k), params_, head_)[0];
    if (cache)
        *cache = std::move(seq);
    return y_hat;
}

std::vector<double> FhnnModel::predict(const Window& window) const
{
    check_window(window);
    return decode(encode(window.x_hist, window.y_hist).z, window.x_fcst);
}

double FhnnModel::accumulate_gradient(const Window& window, double weight)
{
    check_window(window);
    const std::size_t H = cfg_.h_enc;
    const std::size_t K = cfg_.horizon;

    EncoderCache enc;
    const LatentState state = encode(window.x_hist, window.y_hist, &enc);
    LstmSequence dec;
    const std::vector<double> y_hat = decode(state.z, window.x_fcst, &dec);
    const double loss = mse_loss(y_hat, window.y_fcst.values());

    // Head and decoder.
    Matrix dh_steps(K, cfg_.d_z);
    for (std::size_t k = 0; k < K; ++k) {
        const double dy = weight * 2.0 * (y_hat[k] - window.y_fcst(k, 0)) / static_cast<double>(K);
        const double dyv[1] = {dy};
        const auto dh = dense_backward(dyv, dec.hidden(k), params_, head_);
        std::copy(dh.begin(), dh.end(), dh_steps.row(k).begin());
    }
    const auto dec_grad = lstm_sequence_backward(dec, dh_steps, {}, {}, params_, decoder_);
    std::vector<double> dz = dec_grad.d_init.h;
    if (cfg_.z_to_cell)
        for (std::size_t j = 0; j < dz.size(); ++j)
            dz[j] += dec_grad.d_init.c[j];

    // Latent MLP, input laid out as [slow; medium; fast] embeddings.
    const std::vector<double> d_in = mlp_backward(dz, enc.mlp, params_, latent_);
    const std::size_t T = cfg_.input_length;
    Matrix d_fast_steps(T, H);

    if (single_scale()) {
        bilstm_backward(enc.fast, Matrix(), Matrix(), d_in, params_, fast_);
        return loss;
    }

    const std::span<const double> d_slow_emb(d_in.data(), H);
    const std::span<const double> d_medium_emb(d_in.data() + H, H);
    const std::span<const double> d_fast_emb(d_in.data() + 2 * H, H);

    // Slow scale: inputs are [medium row; fast row] at each slow tick.
    const Matrix d_slow_in = bilstm_backward(*enc.slow, Matrix(), Matrix(), d_slow_emb, params_, slow_);
    Matrix d_medium_steps(enc.medium_index.size(), H);
    for (std::size_t i = 0; i < enc.slow_index.size(); ++i) {
        const auto row = d_slow_in.row(i);
        add_into(d_medium_steps.row(enc.slow_from_medium[i]), row.subspan(0, H));
        add_into(d_fast_steps.row(enc.slow_index[i]), row.subspan(H, H));
    }

    // Medium scale: per-step output is fwd+bwd, so both directions see the same gradient.
    const Matrix d_medium_in =
        bilstm_backward(*enc.medium, d_medium_steps, d_medium_steps, d_medium_emb, params_, medium_);
    for (std::size_t i = 0; i < enc.medium_index.size(); ++i)
        add_into(d_fast_steps.row(enc.medium_index[i]), d_medium_in.row(i));

    bilstm_backward(enc.fast, d_fast_steps, d_fast_steps, d_fast_emb, params_, fast_);
    return loss;
}

} // namespace fhnn

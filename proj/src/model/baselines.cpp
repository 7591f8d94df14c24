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

#include "model/baselines.hpp"

#include "numerics/errors.hpp"

namespace fhnn {

namespace {

void expect_layout(const ParamSet& params, std::size_t count, const char* kind)
{
    if (params.size() != count)
        throw ShapeError(std::string(kind) + " parameters do not match config: expected " + std::to_string(count) +
                         " entries, found " + std::to_string(params.size()));
}

} // namespace

LstmBaseline::LstmBaseline(const ModelConfig& cfg, std::uint64_t seed) : Forecaster(cfg, ParamSet{})
{
    Rng rng(seed);
    lstm_ = LstmLayer::add(params_, "lstm", cfg_.d_x, cfg_.d_z, rng);
    head_ = DenseLayer::add(params_, "head", cfg_.d_z, 1, rng);
}

LstmBaseline::LstmBaseline(const ModelConfig& cfg, ParamSet params) : Forecaster(cfg, std::move(params))
{
    expect_layout(params_, 5, "lstm");
    lstm_ = LstmLayer::bind(params_, "lstm");
    head_ = DenseLayer::bind(params_, "head");
    if (lstm_.input_size != cfg_.d_x || lstm_.hidden_size != cfg_.d_z || head_.input_size != cfg_.d_z)
        throw ShapeError("lstm parameters do not match config dimensions");
}

LstmSequence LstmBaseline::run(const Window& w, std::vector<double>& y_hat) const
{
    const std::size_t T = cfg_.input_length;
    const std::size_t K = cfg_.horizon;
    Matrix xs(T + K, cfg_.d_x);
    std::copy(w.x_hist.values().begin(), w.x_hist.values().end(), xs.values().begin());
    std::copy(w.x_fcst.values().begin(), w.x_fcst.values().end(), xs.row(T).begin());
    LstmSequence seq = lstm_sequence(xs, LstmState::zeros(cfg_.d_z), params_, lstm_);
    y_hat.resize(K);
    for (std::size_t k = 0; k < K; ++k)
        y_hat[k] = dense_forward(seq.hidden(T + k), params_, head_)[0];
    return seq;
}

std::vector<double> LstmBaseline::predict(const Window& window) const
{
    check_window(window);
    std::vector<double> y_hat;
    run(window, y_hat);
    return y_hat;
}

double LstmBaseline::accumulate_gradient(const Window& window, double weight)
{
    check_window(window);
    const std::size_t T = cfg_.input_length;
    const std::size_t K = cfg_.horizon;
    std::vector<double> y_hat;
    const LstmSequence seq = run(window, y_hat);
    const double loss = mse_loss(y_hat, window.y_fcst.values());

    Matrix dh_steps(T + K, cfg_.d_z);
    for (std::size_t k = 0; k < K; ++k) {
        const double dy[1] = {weight * 2.0 * (y_hat[k] - window.y_fcst(k, 0)) / static_cast<double>(K)};
        const auto dh = dense_backward(dy, seq.hidden(T + k), params_, head_);
        std::copy(dh.begin(), dh.end(), dh_steps.row(T + k).begin());
    }
    lstm_sequence_backward(seq, dh_steps, {}, {}, params_, lstm_);
    return loss;
}

LstmArBaseline::LstmArBaseline(const ModelConfig& cfg, std::uint64_t seed) : Forecaster(cfg, ParamSet{})
{
    Rng rng(seed);
    lstm_ = LstmLayer::add(params_, "lstm", cfg_.d_x + 1, cfg_.d_z, rng);
    head_ = DenseLayer::add(params_, "head", cfg_.d_z, 1, rng);
}

LstmArBaseline::LstmArBaseline(const ModelConfig& cfg, ParamSet params) : Forecaster(cfg, std::move(params))
{
    expect_layout(params_, 5, "lstm_ar");
    lstm_ = LstmLayer::bind(params_, "lstm");
    head_ = DenseLayer::bind(params_, "head");
    if (lstm_.input_size != cfg_.d_x + 1 || lstm_.hidden_size != cfg_.d_z || head_.input_size != cfg_.d_z)
        throw ShapeError("lstm_ar parameters do not match config dimensions");
}

// Sequence step j consumes original time t = j + 1. Prediction k comes from
// step T-1+k (original time T+k).
LstmSequence LstmArBaseline::run(const Window& w, std::vector<double>& y_hat, bool teacher) const
{
    const std::size_t T = cfg_.input_length;
    const std::size_t K = cfg_.horizon;
    const std::size_t D = cfg_.d_x;
    const std::size_t steps = T + K - 1;
    LstmSequence seq = lstm_sequence_alloc(steps, LstmState::zeros(cfg_.d_z), lstm_);
    y_hat.assign(K, 0.0);
    for (std::size_t j = 0; j < steps; ++j) {
        const std::size_t t = j + 1;
        auto row = seq.xs.row(j);
        const auto x = t < T ? w.x_hist.row(t) : w.x_fcst.row(t - T);
        std::copy(x.begin(), x.end(), row.begin());
        if (t <= T)
            row[D] = w.y_hist(t - 1, 0);
        else
            row[D] = teacher ? w.y_fcst(t - 1 - T, 0) : y_hat[t - 1 - T];
        lstm_sequence_advance(seq, j, params_, lstm_);
        if (t >= T)
            y_hat[t - T] = dense_forward(seq.hidden(j), params_, head_)[0];
    }
    return seq;
}

std::vector<double> LstmArBaseline::predict(const Window& window) const
{
    check_window(window);
    std::vector<double> y_hat;
    run(window, y_hat, false);
    return y_hat;
}

std::vector<double> LstmArBaseline::predict_teacher_forced(const Window& window) const
{
    check_window(window);
    std::vector<double> y_hat;
    run(window, y_hat, true);
    return y_hat;
}

double LstmArBaseline::accumulate_gradient(const Window& window, double weight)
{
    check_window(window);
    const std::size_t T = cfg_.input_length;
    const std::size_t K = cfg_.horizon;
    const std::size_t D = cfg_.d_x;
    const std::size_t H = cfg_.d_z;
    std::vector<double> y_hat;
    const LstmSequence seq = run(window, y_hat, cfg_.teacher_forcing);
    const double loss = mse_loss(y_hat, window.y_fcst.values());

    std::vector<double> d_pred(K);
    for (std::size_t k = 0; k < K; ++k)
        d_pred[k] = weight * 2.0 * (y_hat[k] - window.y_fcst(k, 0)) / static_cast<double>(K);

    std::vector<double> dh(H, 0.0), dc(H, 0.0), dh_prev(H), dc_prev(H), dx(D + 1);
    const std::size_t steps = seq.steps();
    for (std::size_t j = steps; j-- > 0;) {
        const std::size_t t = j + 1;
        if (t >= T) {
            // d_pred[t-T] is complete: the only later consumer (step j+1) was processed first.
            const double dy[1] = {d_pred[t - T]};
            const auto dh_head = dense_backward(dy, seq.hidden(j), params_, head_);
            for (std::size_t i = 0; i < H; ++i)
                dh[i] += dh_head[i];
        }
        lstm_step_backward(seq, j, dh, dc, params_, lstm_, dx, dh_prev, dc_prev);
        if (t > T && !cfg_.teacher_forcing)
            d_pred[t - 1 - T] += dx[D];
        dh.swap(dh_prev);
        dc.swap(dc_prev);
    }
    return loss;
}

} // namespace fhnn

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

#include "recurrent/lstm.hpp"

#include "numerics/errors.hpp"

#include <cmath>

namespace fhnn {

namespace {

inline double sigmoid(double v)
{
    return 1.0 / (1.0 + std::exp(-v));
}

// One exp instead of libm tanh; agrees with std::tanh to a few ulp.
inline double fast_tanh(double v)
{
    if (v > 20.0)
        return 1.0;
    if (v < -20.0)
        return -1.0;
    if (std::abs(v) < 1e-4)
        return std::tanh(v);
    return 1.0 - 2.0 / (1.0 + std::exp(2.0 * v));
}

struct Weights
{
    const double* w_ih;
    const double* w_hh;
    const double* b;
    std::size_t in;
    std::size_t hidden;
};

struct Grads
{
    double* w_ih;
    double* w_hh;
    double* b;
};

Weights weights_of(const ParamSet& params, const LstmLayer& layer)
{
    return {params[layer.w_ih].value.data(), params[layer.w_hh].value.data(), params[layer.b].value.data(),
            layer.input_size, layer.hidden_size};
}

Grads grads_of(ParamSet& params, const LstmLayer& layer)
{
    return {params[layer.w_ih].grad.data(), params[layer.w_hh].grad.data(), params[layer.b].grad.data()};
}

inline void axpy(double alpha, const double* __restrict x, double* __restrict y, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j)
        y[j] += alpha * x[j];
}

void cell_forward(const double* __restrict x, const double* __restrict h_prev, const double* __restrict c_prev,
                  const Weights& w, double* __restrict gates, double* __restrict c, double* __restrict tanh_c,
                  double* __restrict h)
{
    const std::size_t H = w.hidden;
    const std::size_t D = w.in;
    // 4H is always a multiple of 4: four rows at a time gives independent accumulators.
    for (std::size_t r = 0; r < 4 * H; r += 4) {
        double a0 = w.b[r], a1 = w.b[r + 1], a2 = w.b[r + 2], a3 = w.b[r + 3];
        const double* w0 = w.w_ih + r * D;
        for (std::size_t j = 0; j < D; ++j) {
            const double xj = x[j];
            a0 += w0[j] * xj;
            a1 += w0[D + j] * xj;
            a2 += w0[2 * D + j] * xj;
            a3 += w0[3 * D + j] * xj;
        }
        const double* u0 = w.w_hh + r * H;
        for (std::size_t j = 0; j < H; ++j) {
            const double hj = h_prev[j];
            a0 += u0[j] * hj;
            a1 += u0[H + j] * hj;
            a2 += u0[2 * H + j] * hj;
            a3 += u0[3 * H + j] * hj;
        }
        gates[r] = a0;
        gates[r + 1] = a1;
        gates[r + 2] = a2;
        gates[r + 3] = a3;
    }
    for (std::size_t r = 0; r < 2 * H; ++r)
        gates[r] = sigmoid(gates[r]);
    for (std::size_t r = 2 * H; r < 3 * H; ++r)
        gates[r] = fast_tanh(gates[r]);
    for (std::size_t r = 3 * H; r < 4 * H; ++r)
        gates[r] = sigmoid(gates[r]);
    const double* gi = gates;
    const double* gf = gates + H;
    const double* gg = gates + 2 * H;
    const double* go = gates + 3 * H;
    for (std::size_t k = 0; k < H; ++k) {
        c[k] = gf[k] * c_prev[k] + gi[k] * gg[k];
        tanh_c[k] = fast_tanh(c[k]);
        h[k] = go[k] * tanh_c[k];
    }
}

// da is caller-provided scratch of length 4H; dx may be null when the input
// gradient is not needed.
void cell_backward(const double* __restrict x, const double* __restrict h_prev, const double* __restrict c_prev,
                   const double* __restrict gates, const double* __restrict tanh_c, const double* dh,
                   const double* dc, const Weights& w, const Grads& g, double* __restrict da,
                   double* __restrict dx, double* __restrict dh_prev, double* __restrict dc_prev)
{
    const std::size_t H = w.hidden;
    const std::size_t D = w.in;
    const double* gi = gates;
    const double* gf = gates + H;
    const double* gg = gates + 2 * H;
    const double* go = gates + 3 * H;
    for (std::size_t k = 0; k < H; ++k) {
        const double dhk = dh ? dh[k] : 0.0;
        const double d_o = dhk * tanh_c[k];
        const double dct = (dc ? dc[k] : 0.0) + dhk * go[k] * (1.0 - tanh_c[k] * tanh_c[k]);
        const double d_i = dct * gg[k];
        const double d_g = dct * gi[k];
        const double d_f = dct * c_prev[k];
        dc_prev[k] = dct * gf[k];
        da[k] = d_i * gi[k] * (1.0 - gi[k]);
        da[H + k] = d_f * gf[k] * (1.0 - gf[k]);
        da[2 * H + k] = d_g * (1.0 - gg[k] * gg[k]);
        da[3 * H + k] = d_o * go[k] * (1.0 - go[k]);
    }
    if (dx)
        for (std::size_t j = 0; j < D; ++j)
            dx[j] = 0.0;
    for (std::size_t j = 0; j < H; ++j)
        dh_prev[j] = 0.0;
    for (std::size_t r = 0; r < 4 * H; ++r) {
        const double a = da[r];
        g.b[r] += a;
        axpy(a, x, g.w_ih + r * D, D);
        axpy(a, h_prev, g.w_hh + r * H, H);
    }
    // Transposed products, four gate rows per pass.
    for (std::size_t r = 0; r < 4 * H; r += 4) {
        const double a0 = da[r], a1 = da[r + 1], a2 = da[r + 2], a3 = da[r + 3];
        if (dx) {
            const double* w0 = w.w_ih + r * D;
            for (std::size_t j = 0; j < D; ++j)
                dx[j] += a0 * w0[j] + a1 * w0[D + j] + a2 * w0[2 * D + j] + a3 * w0[3 * D + j];
        }
        const double* u0 = w.w_hh + r * H;
        for (std::size_t j = 0; j < H; ++j)
            dh_prev[j] += a0 * u0[j] + a1 * u0[H + j] + a2 * u0[2 * H + j] + a3 * u0[3 * H + j];
    }
}

void require_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw ShapeError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                         std::to_string(got));
}

} // namespace

LstmLayer LstmLayer::add(ParamSet& params, const std::string& prefix, std::size_t input_size,
                         std::size_t hidden_size, Rng& rng)
{
    if (input_size == 0 || hidden_size == 0)
        throw ConfigError("LSTM '" + prefix + "' needs nonzero input and hidden sizes");
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_size));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto random_matrix = [&](std::size_t r, std::size_t c) {
        Matrix m(r, c);
        for (double& v : m.values())
            v = dist(rng);
        return m;
    };
    LstmLayer layer;
    layer.input_size = input_size;
    layer.hidden_size = hidden_size;
    layer.w_ih = params.add(prefix + ".w_ih", random_matrix(4 * hidden_size, input_size));
    layer.w_hh = params.add(prefix + ".w_hh", random_matrix(4 * hidden_size, hidden_size));
    Matrix b = random_matrix(4 * hidden_size, 1);
    for (std::size_t k = 0; k < hidden_size; ++k)
        b[hidden_size + k] = 1.0;
    layer.b = params.add(prefix + ".b", std::move(b));
    return layer;
}

LstmLayer LstmLayer::bind(const ParamSet& params, const std::string& prefix)
{
    LstmLayer layer;
    layer.w_ih = params.index_of(prefix + ".w_ih");
    layer.w_hh = params.index_of(prefix + ".w_hh");
    layer.b = params.index_of(prefix + ".b");
    layer.hidden_size = params[layer.w_hh].value.cols();
    layer.input_size = params[layer.w_ih].value.cols();
    layer.validate(params);
    return layer;
}

void LstmLayer::validate(const ParamSet& params) const
{
    const std::size_t H = hidden_size;
    const auto check = [&](std::size_t idx, std::size_t rows, std::size_t cols) {
        if (idx >= params.size())
            throw ShapeError("LSTM parameter index out of range");
        const Matrix& m = params[idx].value;
        if (m.rows() != rows || m.cols() != cols)
            throw ShapeError("LSTM parameter '" + params[idx].name + "' has shape " + m.shape_string() +
                             ", expected (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
    };
    check(w_ih, 4 * H, input_size);
    check(w_hh, 4 * H, H);
    check(b, 4 * H, 1);
}

LstmStep lstm_cell_forward(std::span<const double> x, const LstmState& prev, const ParamSet& params,
                           const LstmLayer& layer)
{
    layer.validate(params);
    const std::size_t H = layer.hidden_size;
    require_size(x.size(), layer.input_size, "lstm_cell_forward input");
    require_size(prev.h.size(), H, "lstm_cell_forward h_prev");
    require_size(prev.c.size(), H, "lstm_cell_forward c_prev");

    LstmStep step;
    auto& cache = step.cache;
    cache.x.assign(x.begin(), x.end());
    cache.h_prev = prev.h;
    cache.c_prev = prev.c;
    cache.gates.resize(4 * H);
    cache.c.resize(H);
    cache.tanh_c.resize(H);
    step.next.h.resize(H);
    cell_forward(cache.x.data(), cache.h_prev.data(), cache.c_prev.data(), weights_of(params, layer),
                 cache.gates.data(), cache.c.data(), cache.tanh_c.data(), step.next.h.data());
    step.next.c = cache.c;
    return step;
}

LstmCellGrad lstm_cell_backward(std::span<const double> dh, std::span<const double> dc,
                                const LstmStepCache& cache, ParamSet& params, const LstmLayer& layer)
{
    layer.validate(params);
    const std::size_t H = layer.hidden_size;
    require_size(dh.size(), H, "lstm_cell_backward dh");
    require_size(dc.size(), H, "lstm_cell_backward dc");
    if (cache.x.size() != layer.input_size || cache.gates.size() != 4 * H)
        throw ShapeError("lstm_cell_backward: cache does not match layer");

    LstmCellGrad out{std::vector<double>(layer.input_size), std::vector<double>(H), std::vector<double>(H)};
    std::vector<double> da(4 * H);
    cell_backward(cache.x.data(), cache.h_prev.data(), cache.c_prev.data(), cache.gates.data(),
                  cache.tanh_c.data(), dh.data(), dc.data(), weights_of(params, layer), grads_of(params, layer),
                  da.data(), out.dx.data(), out.dh_prev.data(), out.dc_prev.data());
    return out;
}

LstmState LstmSequence::final_state() const
{
    const auto t = steps();
    return {std::vector<double>(h.row(t).begin(), h.row(t).end()),
            std::vector<double>(c.row(t).begin(), c.row(t).end())};
}

Matrix LstmSequence::hiddens() const
{
    const std::size_t T = steps();
    const std::size_t H = h.cols();
    return Matrix(T, H, std::vector<double>(h.data() + H, h.data() + (T + 1) * H));
}

LstmSequence lstm_sequence_alloc(std::size_t steps, const LstmState& init, const LstmLayer& layer)
{
    if (steps == 0)
        throw ShapeError("lstm_sequence: empty input sequence");
    const std::size_t H = layer.hidden_size;
    require_size(init.h.size(), H, "lstm_sequence h0");
    require_size(init.c.size(), H, "lstm_sequence c0");
    LstmSequence seq{Matrix(steps, layer.input_size), Matrix(steps + 1, H), Matrix(steps + 1, H),
                     Matrix(steps, 4 * H), Matrix(steps, H)};
    std::copy(init.h.begin(), init.h.end(), seq.h.row(0).begin());
    std::copy(init.c.begin(), init.c.end(), seq.c.row(0).begin());
    return seq;
}

void lstm_sequence_advance(LstmSequence& seq, std::size_t t, const ParamSet& params, const LstmLayer& layer)
{
    if (t >= seq.steps())
        throw ShapeError("lstm_sequence_advance: step out of range");
    cell_forward(seq.xs.row(t).data(), seq.h.row(t).data(), seq.c.row(t).data(), weights_of(params, layer),
                 seq.gates.row(t).data(), seq.c.row(t + 1).data(), seq.tanh_c.row(t).data(),
                 seq.h.row(t + 1).data());
}

LstmSequence lstm_sequence(const Matrix& xs, const LstmState& init, const ParamSet& params, const LstmLayer& layer)
{
    layer.validate(params);
    if (xs.rows() == 0)
        throw ShapeError("lstm_sequence: empty input sequence");
    require_size(xs.cols(), layer.input_size, "lstm_sequence input width");
    LstmSequence seq = lstm_sequence_alloc(xs.rows(), init, layer);
    seq.xs = xs;
    for (std::size_t t = 0; t < xs.rows(); ++t)
        lstm_sequence_advance(seq, t, params, layer);
    return seq;
}

void lstm_step_backward(const LstmSequence& seq, std::size_t t, std::span<const double> dh,
                        std::span<const double> dc, ParamSet& params, const LstmLayer& layer,
                        std::span<double> dx, std::span<double> dh_prev, std::span<double> dc_prev)
{
    const std::size_t H = layer.hidden_size;
    thread_local std::vector<double> da;
    da.resize(4 * H);
    cell_backward(seq.xs.row(t).data(), seq.h.row(t).data(), seq.c.row(t).data(), seq.gates.row(t).data(),
                  seq.tanh_c.row(t).data(), dh.empty() ? nullptr : dh.data(), dc.empty() ? nullptr : dc.data(),
                  weights_of(params, layer), grads_of(params, layer), da.data(), dx.empty() ? nullptr : dx.data(),
                  dh_prev.data(), dc_prev.data());
}

LstmSequenceGrad lstm_sequence_backward(const LstmSequence& seq, const Matrix& dh_steps,
                                        std::span<const double> dh_final, std::span<const double> dc_final,
                                        ParamSet& params, const LstmLayer& layer)
{
    layer.validate(params);
    const std::size_t T = seq.steps();
    const std::size_t H = layer.hidden_size;
    if (seq.xs.cols() != layer.input_size || seq.h.cols() != H)
        throw ShapeError("lstm_sequence_backward: cache does not match layer");
    if (!dh_steps.empty() && (dh_steps.rows() != T || dh_steps.cols() != H))
        throw ShapeError("lstm_sequence_backward: per-step gradient has shape " + dh_steps.shape_string());
    if (!dh_final.empty())
        require_size(dh_final.size(), H, "lstm_sequence_backward dh_final");
    if (!dc_final.empty())
        require_size(dc_final.size(), H, "lstm_sequence_backward dc_final");

    LstmSequenceGrad out{Matrix(T, layer.input_size), LstmState::zeros(H)};
    std::vector<double> dh(H, 0.0), dc(H, 0.0), dh_prev(H), dc_prev(H);
    if (!dh_final.empty())
        std::copy(dh_final.begin(), dh_final.end(), dh.begin());
    if (!dc_final.empty())
        std::copy(dc_final.begin(), dc_final.end(), dc.begin());

    for (std::size_t t = T; t-- > 0;) {
        if (!dh_steps.empty()) {
            const auto row = dh_steps.row(t);
            for (std::size_t k = 0; k < H; ++k)
                dh[k] += row[k];
        }
        lstm_step_backward(seq, t, dh, dc, params, layer, out.dxs.row(t), dh_prev, dc_prev);
        dh.swap(dh_prev);
        dc.swap(dc_prev);
    }
    out.d_init.h = std::move(dh);
    out.d_init.c = std::move(dc);
    return out;
}

} // namespace fhnn

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

#include "doctest.h"
#include "test_util.hpp"

#include "numerics/errors.hpp"
#include "numerics/finite_diff.hpp"
#include "recurrent/bilstm.hpp"
#include "recurrent/lstm.hpp"
#include "recurrent/mlp.hpp"

#include <cmath>

using namespace fhnn;
using fhnn::testing::random_matrix;

namespace {

// Scalar reference: one gate at a time straight from the cell equations,
// reading weights through Matrix element access.
LstmState reference_cell(const std::vector<double>& x, const LstmState& prev, const ParamSet& ps, const LstmLayer& l)
{
    const Matrix& wi = ps[l.w_ih].value;
    const Matrix& wh = ps[l.w_hh].value;
    const Matrix& b = ps[l.b].value;
    const std::size_t H = l.hidden_size;
    auto pre = [&](std::size_t row) {
        double a = b(row, 0);
        for (std::size_t j = 0; j < x.size(); ++j)
            a += wi(row, j) * x[j];
        for (std::size_t j = 0; j < H; ++j)
            a += wh(row, j) * prev.h[j];
        return a;
    };
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    LstmState next = LstmState::zeros(H);
    for (std::size_t k = 0; k < H; ++k) {
        const double i = sig(pre(k));
        const double f = sig(pre(H + k));
        const double g = std::tanh(pre(2 * H + k));
        const double o = sig(pre(3 * H + k));
        next.c[k] = f * prev.c[k] + i * g;
        next.h[k] = o * std::tanh(next.c[k]);
    }
    return next;
}

std::vector<double> random_vec(std::size_t n, Rng& rng, double scale = 1.0)
{
    const Matrix m = random_matrix(n, 1, rng, scale);
    return {m.values().begin(), m.values().end()};
}

double sum(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

void check_grads(ParamSet& ps, const LossFn& loss)
{
    const auto numeric = finite_diff_grad(loss, ps, 1e-5);
    const auto result = compare_gradients(ps, numeric, 1e-5, 1e-8);
    INFO("worst ", result.worst_param, "[", result.worst_index, "] analytic=", result.analytic,
         " numeric=", result.numeric, " max_rel=", result.max_rel_error);
    CHECK(result.passed());
}

} // namespace

TEST_CASE("zero-parameter cell from a zero state stays at zero")
{
    Rng rng(1);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 3, 4, rng);
    fhnn::testing::zero_values(ps);
    const auto step = lstm_cell_forward(random_vec(3, rng), LstmState::zeros(4), ps, layer);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(step.next.h[k] == 0.0);
        CHECK(step.next.c[k] == 0.0);
    }
}

TEST_CASE("zero-parameter cell halves the carried cell state")
{
    Rng rng(2);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
    fhnn::testing::zero_values(ps);
    LstmState prev{{0.0, 0.0, 0.0}, {1.0, -2.0, 0.3}};
    const auto step = lstm_cell_forward(random_vec(2, rng), prev, ps, layer);
    for (std::size_t k = 0; k < 3; ++k) {
        // sigma(0) = 0.5 on every gate, tanh(0) = 0 on the candidate.
        CHECK(step.next.c[k] == doctest::Approx(0.5 * prev.c[k]).epsilon(1e-15));
        CHECK(step.next.h[k] == doctest::Approx(0.5 * std::tanh(0.5 * prev.c[k])).epsilon(1e-15));
    }
}

TEST_CASE("cell forward matches the scalar reference")
{
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        Rng rng(seed);
        ParamSet ps;
        auto layer = LstmLayer::add(ps, "l", 3, 5, rng);
        fhnn::testing::randomize(ps, rng, 0.8);
        const auto x = random_vec(3, rng);
        LstmState prev{random_vec(5, rng, 0.9), random_vec(5, rng, 2.0)};
        const auto got = lstm_cell_forward(x, prev, ps, layer).next;
        const auto want = reference_cell(x, prev, ps, layer);
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(got.h[k] == doctest::Approx(want.h[k]).epsilon(1e-14));
            CHECK(got.c[k] == doctest::Approx(want.c[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("cell forward rejects shape mismatches")
{
    Rng rng(6);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 3, 2, rng);
    CHECK_THROWS_AS(lstm_cell_forward(random_vec(2, rng), LstmState::zeros(2), ps, layer), ShapeError);
    CHECK_THROWS_AS(lstm_cell_forward(random_vec(3, rng), LstmState::zeros(3), ps, layer), ShapeError);
}

TEST_CASE("cell backward with zero upstream gradient")
{
    Rng rng(7);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
    const auto step = lstm_cell_forward(random_vec(2, rng), LstmState{random_vec(3, rng), random_vec(3, rng)}, ps, layer);
    const std::vector<double> zero(3, 0.0);
    const auto g = lstm_cell_backward(zero, zero, step.cache, ps, layer);
    for (double v : g.dx)
        CHECK(v == 0.0);
    for (double v : g.dh_prev)
        CHECK(v == 0.0);
    for (double v : g.dc_prev)
        CHECK(v == 0.0);
    CHECK(ps.grad_norm() == 0.0);
}

TEST_CASE("cell backward matches finite differences of sum(h)")
{
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Rng rng(seed);
        ParamSet ps;
        auto layer = LstmLayer::add(ps, "l", 3, 4, rng);
        const auto x = random_vec(3, rng);
        const LstmState prev{random_vec(4, rng, 0.9), random_vec(4, rng)};
        const auto step = lstm_cell_forward(x, prev, ps, layer);
        lstm_cell_backward(std::vector<double>(4, 1.0), std::vector<double>(4, 0.0), step.cache, ps, layer);
        check_grads(ps, [&](const ParamSet& p) { return sum(lstm_cell_forward(x, prev, p, layer).next.h); });
    }
}

TEST_CASE("two chained cells accumulate shared-parameter gradients")
{
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        Rng rng(seed);
        ParamSet ps;
        auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
        const auto x1 = random_vec(2, rng), x2 = random_vec(2, rng);
        const LstmState s0{random_vec(3, rng, 0.5), random_vec(3, rng)};
        auto run = [&](const ParamSet& p) {
            const auto a = lstm_cell_forward(x1, s0, p, layer);
            const auto b = lstm_cell_forward(x2, a.next, p, layer);
            return std::pair{a, b};
        };
        auto loss = [&](const ParamSet& p) {
            const auto [a, b] = run(p);
            return sum(b.next.h) + 0.5 * sum(b.next.c);
        };
        const auto [a, b] = run(ps);
        const auto g2 = lstm_cell_backward(std::vector<double>(3, 1.0), std::vector<double>(3, 0.5), b.cache, ps, layer);
        lstm_cell_backward(g2.dh_prev, g2.dc_prev, a.cache, ps, layer);
        check_grads(ps, loss);
    }
}

TEST_CASE("sequence base case and zero parameters")
{
    Rng rng(31);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
    const Matrix xs = random_matrix(1, 2, rng);
    const LstmState init{random_vec(3, rng, 0.5), random_vec(3, rng)};
    const auto seq = lstm_sequence(xs, init, ps, layer);
    const auto cell = lstm_cell_forward(xs.row(0), init, ps, layer);
    CHECK(seq.final_state().h == cell.next.h);
    CHECK(seq.final_state().c == cell.next.c);

    fhnn::testing::zero_values(ps);
    const auto zero = lstm_sequence(random_matrix(6, 2, rng, 5.0), LstmState::zeros(3), ps, layer);
    const Matrix hs = zero.hiddens();
    for (double v : hs.values())
        CHECK(v == 0.0);

    CHECK_THROWS_AS(lstm_sequence(Matrix(0, 2), LstmState::zeros(3), ps, layer), ShapeError);
}

TEST_CASE("sequence final state matches iterated scalar reference")
{
    Rng rng(32);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 3, 4, rng);
    fhnn::testing::randomize(ps, rng, 0.7);
    const Matrix xs = random_matrix(5, 3, rng);
    const auto seq = lstm_sequence(xs, LstmState::zeros(4), ps, layer);
    LstmState ref = LstmState::zeros(4);
    for (std::size_t t = 0; t < 5; ++t)
        ref = reference_cell({xs.row(t).begin(), xs.row(t).end()}, ref, ps, layer);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(seq.final_state().h[k] == doctest::Approx(ref.h[k]).epsilon(1e-13));
}

TEST_CASE("unrolling in two chunks equals one pass")
{
    Rng rng(33);
    ParamSet ps;
    auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
    const Matrix xs = random_matrix(9, 2, rng);
    const auto full = lstm_sequence(xs, LstmState::zeros(3), ps, layer);
    Matrix head(4, 2), tail(5, 2);
    std::copy(xs.values().begin(), xs.values().begin() + 8, head.values().begin());
    std::copy(xs.values().begin() + 8, xs.values().end(), tail.values().begin());
    const auto first = lstm_sequence(head, LstmState::zeros(3), ps, layer);
    const auto second = lstm_sequence(tail, first.final_state(), ps, layer);
    CHECK(second.final_state().h == full.final_state().h);
    CHECK(second.final_state().c == full.final_state().c);
}

TEST_CASE("hidden states stay in [-1, 1] and cell states are bounded by step count")
{
    Rng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        ParamSet ps;
        auto layer = LstmLayer::add(ps, "l", 3, 5, rng);
        fhnn::testing::randomize(ps, rng, 1.0);
        const Matrix xs = random_matrix(40, 3, rng, 1.0);
        const auto seq = lstm_sequence(xs, LstmState::zeros(5), ps, layer);
        for (std::size_t t = 0; t < 40; ++t)
            for (std::size_t k = 0; k < 5; ++k) {
                CHECK(std::abs(seq.hidden(t)[k]) <= 1.0);
                CHECK(std::abs(seq.cell(t)[k]) <= static_cast<double>(t + 1));
            }
    }
}

TEST_CASE("sequence backward matches finite differences")
{
    for (std::uint64_t seed : {41u, 42u, 43u}) {
        Rng rng(seed);
        ParamSet ps;
        auto layer = LstmLayer::add(ps, "l", 2, 3, rng);
        const Matrix xs = random_matrix(6, 2, rng);
        const Matrix weights = random_matrix(6, 3, rng);
        auto loss = [&](const ParamSet& p) {
            const auto seq = lstm_sequence(xs, LstmState::zeros(3), p, layer);
            double s = 0.0;
            for (std::size_t t = 0; t < 6; ++t)
                for (std::size_t k = 0; k < 3; ++k)
                    s += weights(t, k) * seq.hidden(t)[k];
            return s + sum(seq.final_state().c);
        };
        const auto seq = lstm_sequence(xs, LstmState::zeros(3), ps, layer);
        lstm_sequence_backward(seq, weights, {}, std::vector<double>(3, 1.0), ps, layer);
        check_grads(ps, loss);
    }
}

TEST_CASE("bilstm embedding rules")
{
    Rng rng(51);
    ParamSet ps;
    auto layer = BiLstmLayer::add(ps, "bi", 2, 3, rng);
    const Matrix xs = random_matrix(7, 2, rng);

    SUBCASE("zero backward params leave the forward terminal hidden")
    {
        for (auto idx : {layer.bwd.w_ih, layer.bwd.w_hh, layer.bwd.b})
            ps[idx].value.fill(0.0);
        const auto out = bilstm_embed(xs, ps, layer);
        const auto fwd = lstm_sequence(xs, LstmState::zeros(3), ps, layer.fwd);
        CHECK(out.embedding == fwd.final_state().h);
    }

    SUBCASE("length-1 input sums both single steps")
    {
        const Matrix one = random_matrix(1, 2, rng);
        const auto out = bilstm_embed(one, ps, layer);
        const auto f = lstm_cell_forward(one.row(0), LstmState::zeros(3), ps, layer.fwd).next.h;
        const auto b = lstm_cell_forward(one.row(0), LstmState::zeros(3), ps, layer.bwd).next.h;
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(out.embedding[k] == doctest::Approx(f[k] + b[k]).epsilon(1e-15));
    }

    SUBCASE("time reversal with swapped directions")
    {
        ParamSet swapped;
        auto sw = BiLstmLayer::add(swapped, "bi", 2, 3, rng);
        swapped[sw.fwd.w_ih].value = ps[layer.bwd.w_ih].value;
        swapped[sw.fwd.w_hh].value = ps[layer.bwd.w_hh].value;
        swapped[sw.fwd.b].value = ps[layer.bwd.b].value;
        swapped[sw.bwd.w_ih].value = ps[layer.fwd.w_ih].value;
        swapped[sw.bwd.w_hh].value = ps[layer.fwd.w_hh].value;
        swapped[sw.bwd.b].value = ps[layer.fwd.b].value;
        Matrix rev(7, 2);
        for (std::size_t t = 0; t < 7; ++t)
            std::copy(xs.row(6 - t).begin(), xs.row(6 - t).end(), rev.row(t).begin());
        const auto a = bilstm_embed(xs, ps, layer).embedding;
        const auto b = bilstm_embed(rev, swapped, sw).embedding;
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-15));
    }
}

TEST_CASE("bilstm rejects mismatched direction widths")
{
    Rng rng(52);
    ParamSet ps;
    BiLstmLayer layer{LstmLayer::add(ps, "f", 2, 3, rng), LstmLayer::add(ps, "b", 2, 4, rng)};
    CHECK_THROWS_AS(bilstm_embed(random_matrix(3, 2, rng), ps, layer), ShapeError);
}

TEST_CASE("bilstm backward matches finite differences")
{
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        Rng rng(seed);
        ParamSet ps;
        auto layer = BiLstmLayer::add(ps, "bi", 2, 3, rng);
        const Matrix xs = random_matrix(5, 2, rng);
        const Matrix wf = random_matrix(5, 3, rng), wb = random_matrix(5, 3, rng);
        const auto we = random_vec(3, rng);
        auto loss = [&](const ParamSet& p) {
            const auto out = bilstm_embed(xs, p, layer);
            double s = 0.0;
            for (std::size_t i = 0; i < wf.size(); ++i)
                s += wf[i] * out.h_fwd[i] + wb[i] * out.h_bwd[i];
            for (std::size_t k = 0; k < 3; ++k)
                s += we[k] * out.embedding[k];
            return s;
        };
        const auto out = bilstm_embed(xs, ps, layer);
        bilstm_backward(out, wf, wb, we, ps, layer);
        check_grads(ps, loss);
    }
}

TEST_CASE("mlp zero and passthrough cases")
{
    Rng rng(71);
    ParamSet ps;
    auto mlp = MlpLayer::add(ps, "mlp", 3, 3, 3, rng);
    fhnn::testing::zero_values(ps);
    for (double v : mlp_forward(random_vec(3, rng), ps, mlp))
        CHECK(v == 0.0);

    ps[mlp.output.w].value = Matrix::identity(3);
    ps[mlp.output.b].value = Matrix::from_rows({{0.5}, {-1.0}, {2.0}});
    CHECK(mlp_forward(random_vec(3, rng), ps, mlp) == std::vector<double>{0.5, -1.0, 2.0});
    CHECK_THROWS_AS(mlp_forward(random_vec(2, rng), ps, mlp), ShapeError);
}

TEST_CASE("mlp backward matches finite differences")
{
    for (std::uint64_t seed : {81u, 82u, 83u}) {
        Rng rng(seed);
        ParamSet ps;
        auto mlp = MlpLayer::add(ps, "mlp", 4, 5, 3, rng);
        const auto x = random_vec(4, rng);
        const auto w = random_vec(3, rng);
        auto loss = [&](const ParamSet& p) {
            const auto y = mlp_forward(x, p, mlp);
            return w[0] * y[0] + w[1] * y[1] + w[2] * y[2] + y[0] * y[1];
        };
        MlpCache cache;
        const auto y = mlp_forward(x, ps, mlp, &cache);
        mlp_backward(std::vector<double>{w[0] + y[1], w[1] + y[0], w[2]}, cache, ps, mlp);
        check_grads(ps, loss);
    }
}

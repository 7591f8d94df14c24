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
#include "grad_check.hpp"

#include "model/baselines.hpp"
#include "model/fhnn_model.hpp"
#include "model/model_io.hpp"
#include "numerics/adam.hpp"
#include "numerics/errors.hpp"

#include <cmath>

using namespace fhnn;
using fhnn::testing::random_window;
using fhnn::testing::tiny_config;

namespace {

void zero_all(Forecaster& model)
{
    fhnn::testing::zero_values(model.params());
}

} // namespace

TEST_CASE("downsample keeps the most recent step")
{
    CHECK(downsample_indices(6, 1) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    const auto idx = downsample_indices(720, 4);
    CHECK(idx.size() == 180);
    CHECK(idx.back() == 719);
    CHECK(downsample_indices(5, 2) == std::vector<std::size_t>{0, 2, 4});
    CHECK_THROWS_AS(downsample_indices(5, 0), ConfigError);
}

TEST_CASE("downsample length is ceil(T/k)")
{
    for (std::size_t T = 1; T <= 60; ++T)
        for (std::size_t k = 1; k <= 12; ++k) {
            const auto idx = downsample_indices(T, k);
            CHECK(idx.size() == (T + k - 1) / k);
            CHECK(idx.back() == T - 1);
        }
}

TEST_CASE("encoder shapes for the tiny config")
{
    auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 1);
    Rng rng(2);
    const Window w = random_window(cfg, rng);
    const auto state = model.encode(w.x_hist, w.y_hist);
    CHECK(state.fast.rows() == 8);
    CHECK(state.medium.rows() == 4);
    CHECK(state.slow.rows() == 2);
    CHECK(state.z.size() == 6);
    CHECK(all_finite(state.z));
}

TEST_CASE("nws-sized encoder: 33 latent inputs, 32-dim z")
{
    ModelConfig cfg; // defaults mirror the 6-hourly preset
    cfg.input_length = 56;
    FhnnModel model(cfg, 3);
    CHECK(model.params()[model.params().index_of("enc.latent.l1.w")].value.cols() == 33);
    Rng rng(4);
    const Window w = random_window(cfg, rng);
    CHECK(model.encode(w.x_hist, w.y_hist).z.size() == 32);
    CHECK(model.predict(w).size() == 28);
}

TEST_CASE("trajectory lengths for random T, m, s")
{
    Rng rng(5);
    std::uniform_int_distribution<std::size_t> pick(1, 30);
    for (int trial = 0; trial < 25; ++trial) {
        auto cfg = tiny_config(ModelKind::fhnn);
        cfg.m = pick(rng) % 6 + 1;
        cfg.s = cfg.m + pick(rng) % 8;
        cfg.input_length = cfg.s + pick(rng);
        FhnnModel model(cfg, 6);
        const Window w = random_window(cfg, rng);
        const auto st = model.encode(w.x_hist, w.y_hist);
        const auto T = cfg.input_length;
        CHECK(st.fast.rows() == T);
        CHECK(st.medium.rows() == (T + cfg.m - 1) / cfg.m);
        CHECK(st.slow.rows() == (T + cfg.s - 1) / cfg.s);
    }
}

TEST_CASE("m = s = 1 runs with full-length trajectories")
{
    auto cfg = tiny_config(ModelKind::fhnn);
    cfg.m = 1;
    cfg.s = 1;
    FhnnModel model(cfg, 7);
    Rng rng(8);
    const Window w = random_window(cfg, rng);
    const auto st = model.encode(w.x_hist, w.y_hist);
    CHECK(st.medium.rows() == 8);
    CHECK(st.slow.rows() == 8);
    CHECK(model.predict(w).size() == 3);
}

TEST_CASE("history shorter than the slow stride is rejected")
{
    auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 9);
    CHECK_THROWS_AS(model.encode(Matrix(3, 2), Matrix(3, 1)), ShapeError);
    cfg.s = 9;
    CHECK_THROWS_AS(FhnnModel(cfg, 9), ConfigError);
}

TEST_CASE("all-zero parameters give z = 0 and y_hat = 0")
{
    Rng rng(10);
    for (auto kind : {ModelKind::fhnn, ModelKind::fhnn_single, ModelKind::lstm, ModelKind::lstm_ar}) {
        const auto cfg = tiny_config(kind);
        auto model = make_forecaster(cfg, 11);
        zero_all(*model);
        const Window w = random_window(cfg, rng);
        for (double v : model->predict(w))
            CHECK(v == 0.0);
        if (auto* f = dynamic_cast<FhnnModel*>(model.get()))
            for (double v : f->encode(w.x_hist, w.y_hist).z)
                CHECK(v == 0.0);
    }
}

TEST_CASE("constant head emits its bias on every step")
{
    const auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 12);
    auto& ps = model.params();
    ps[ps.index_of("dec.head.w")].value.fill(0.0);
    ps[ps.index_of("dec.head.b")].value.fill(0.37);
    Rng rng(13);
    const Window w = random_window(cfg, rng);
    for (double v : model.decode(std::vector<double>(6, 0.3), w.x_fcst))
        CHECK(v == 0.37);
    CHECK_THROWS_AS(model.decode(std::vector<double>(6, 0.0), Matrix(0, 2)), ShapeError);
    CHECK_THROWS_AS(model.decode(std::vector<double>(5, 0.0), w.x_fcst), ShapeError);
}

TEST_CASE("forward is deterministic and z ignores forecast drivers")
{
    const auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 14);
    Rng rng(15);
    Window w = random_window(cfg, rng);
    CHECK(model.predict(w) == model.predict(w));
    const auto z1 = model.encode(w.x_hist, w.y_hist).z;
    w.x_fcst = fhnn::testing::random_matrix(3, 2, rng, 9.0);
    CHECK(model.encode(w.x_hist, w.y_hist).z == z1);
}

TEST_CASE("window predictions do not depend on batch order")
{
    const auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 16);
    Rng rng(17);
    const Window a = random_window(cfg, rng), b = random_window(cfg, rng);
    const auto pa = model.predict(a);
    const auto pb = model.predict(b);
    CHECK(model.predict(b) == pb);
    CHECK(model.predict(a) == pa);
}

TEST_CASE("mse loss examples")
{
    const std::vector<double> y{1.0, 3.0};
    CHECK(mse_loss(y, y) == 0.0);
    CHECK(mse_loss(std::vector<double>{0.0, 0.0}, y) == 5.0);
    CHECK(mse_loss(std::vector<double>{1.5, 3.5}, y) == doctest::Approx(0.25));
    CHECK_THROWS_AS(mse_loss(std::vector<double>{1.0}, y), ShapeError);
}

TEST_CASE("perfect prediction gives zero gradient")
{
    const auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 18);
    Rng rng(19);
    Window w = random_window(cfg, rng);
    const auto y_hat = model.predict(w);
    w.y_fcst = Matrix::column(y_hat);
    model.params().zero_grad();
    CHECK(model.accumulate_gradient(w, 1.0) == 0.0);
    CHECK(model.params().grad_norm() == 0.0);
}

TEST_CASE("head bias gradient equals -2 mean residual")
{
    for (auto kind : {ModelKind::fhnn, ModelKind::lstm}) {
        const auto cfg = tiny_config(kind);
        auto model = make_forecaster(cfg, 20);
        Rng rng(21);
        const Window w = random_window(cfg, rng);
        const auto y_hat = model->predict(w);
        double mean_residual = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            mean_residual += (w.y_fcst(k, 0) - y_hat[k]) / 3.0;
        model->params().zero_grad();
        model->accumulate_gradient(w, 1.0);
        const auto& ps = model->params();
        const std::string bias = kind == ModelKind::fhnn ? "dec.head.b" : "head.b";
        CHECK(ps[ps.index_of(bias)].grad[0] == doctest::Approx(-2.0 * mean_residual).epsilon(1e-12));
    }
}

TEST_CASE("end-to-end gradients match finite differences")
{
    struct Case
    {
        const char* name;
        ModelConfig cfg;
    };
    std::vector<Case> cases;
    cases.push_back({"fhnn", tiny_config(ModelKind::fhnn)});
    cases.push_back({"fhnn_single", tiny_config(ModelKind::fhnn_single)});
    cases.push_back({"lstm", tiny_config(ModelKind::lstm)});
    cases.push_back({"lstm_ar", tiny_config(ModelKind::lstm_ar)});
    auto tf = tiny_config(ModelKind::lstm_ar);
    tf.teacher_forcing = true;
    cases.push_back({"lstm_ar teacher forcing", tf});
    auto zc = tiny_config(ModelKind::fhnn);
    zc.z_to_cell = true;
    cases.push_back({"fhnn z_to_cell", zc});
    auto odd = tiny_config(ModelKind::fhnn);
    odd.input_length = 7;
    odd.m = 4;
    odd.s = 6; // earliest slow tick precedes every medium tick
    cases.push_back({"fhnn unaligned strides", odd});

    for (const auto& c : cases)
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto result = fhnn::testing::model_gradient_check(c.cfg, seed);
            INFO(c.name, " seed ", seed, ": worst ", result.worst_param, "[", result.worst_index,
                 "] analytic=", result.analytic, " numeric=", result.numeric, " max_rel=", result.max_rel_error);
            CHECK(result.passed());
        }
}

TEST_CASE("model checkpoint round trip")
{
    const auto dir = fhnn::testing::scratch_dir("model_io");
    Rng rng(30);
    for (auto kind : {ModelKind::fhnn, ModelKind::fhnn_single, ModelKind::lstm, ModelKind::lstm_ar}) {
        const auto cfg = tiny_config(kind);
        auto model = make_forecaster(cfg, 31);
        const auto path = (dir / (to_string(kind) + ".ckpt")).string();
        save_model(path, *model, {{"norm.note", "x"}});
        const auto loaded = load_model(path);
        CHECK(loaded.model->params().values_equal(model->params()));
        CHECK(loaded.model->config().kind == kind);
        CHECK(loaded.metadata.at("norm.note") == "x");
        const Window w = random_window(cfg, rng);
        CHECK(loaded.model->predict(w) == model->predict(w));
    }
}

TEST_CASE("loading validates the dimension chain")
{
    auto cfg = tiny_config(ModelKind::fhnn);
    FhnnModel model(cfg, 40);
    cfg.h_enc = 4;
    CHECK_THROWS_AS(make_forecaster(cfg, model.params()), ShapeError);
    auto lstm_cfg = tiny_config(ModelKind::lstm);
    CHECK_THROWS(make_forecaster(lstm_cfg, model.params()));
}

TEST_CASE("teacher-forced AR fits at least as well as free running on its training windows")
{
    // Train a small AR model with teacher forcing, then compare its two
    // horizon modes on the training set.
    auto cfg = tiny_config(ModelKind::lstm_ar);
    cfg.input_length = 12;
    cfg.horizon = 4;
    Rng rng(50);
    std::vector<Window> windows;
    for (int i = 0; i < 8; ++i) {
        Window w;
        w.x_hist = fhnn::testing::random_matrix(12, 2, rng);
        w.x_fcst = fhnn::testing::random_matrix(4, 2, rng);
        w.y_hist = Matrix(12, 1);
        w.y_fcst = Matrix(4, 1);
        double y = 0.0;
        for (std::size_t t = 0; t < 16; ++t) {
            const double x = t < 12 ? w.x_hist(t, 0) : w.x_fcst(t - 12, 0);
            y = 0.7 * y + 0.5 * x;
            (t < 12 ? w.y_hist(t, 0) : w.y_fcst(t - 12, 0)) = y;
        }
        windows.push_back(std::move(w));
    }
    cfg.teacher_forcing = true;
    auto model = make_forecaster(cfg, 51);
    auto state = AdamState::for_params(model->params(), 0.01);
    for (int epoch = 0; epoch < 300; ++epoch) {
        model->params().zero_grad();
        for (const auto& w : windows)
            model->accumulate_gradient(w, 1.0 / windows.size());
        adam_step(model->params(), state);
    }
    const auto& ar = dynamic_cast<const LstmArBaseline&>(*model);
    double tf_loss = 0.0, free_loss = 0.0;
    for (const auto& w : windows) {
        tf_loss += mse_loss(ar.predict_teacher_forced(w), w.y_fcst.values());
        free_loss += mse_loss(ar.predict(w), w.y_fcst.values());
    }
    CHECK(tf_loss <= free_loss);
}

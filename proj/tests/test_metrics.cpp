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
#include "oracles.hpp"
#include "test_util.hpp"

#include "metrics/nse.hpp"
#include "metrics/report.hpp"
#include "metrics/svg_plot.hpp"
#include "model/fhnn_model.hpp"
#include "numerics/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace fhnn;
using fhnn::testing::reference_nse;

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path)
{
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    return lines;
}

ReportRow row(const std::string& id, double nse_w, double nse_p = 0.0)
{
    return {id, 7, 10, 0, nse_w, nse_p, 0.3};
}

} // namespace

TEST_CASE("nse of a perfect forecast is 1")
{
    const std::vector<double> y = {1.0, 4.0, 2.0, 8.0};
    CHECK(nse(y, y) == 1.0);
}

TEST_CASE("nse of the climatological mean is exactly 0")
{
    const std::vector<double> y = {1.0, 4.0, 2.0, 8.0, 0.5};
    double m = 0.0;
    for (double v : y)
        m += v;
    m /= 5.0;
    CHECK(nse(y, std::vector<double>(5, m)) == 0.0);
}

TEST_CASE("nse((1,2,3), (1,2,4)) = 0.5")
{
    CHECK(nse(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 4}) == 0.5);
}

TEST_CASE("nse rejects constant observations and mismatched lengths")
{
    CHECK_THROWS_AS(nse(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), UndefinedNseError);
    CHECK_THROWS_AS(nse(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), ShapeError);
    CHECK_THROWS(nse(std::vector<double>{}, std::vector<double>{}));
}

TEST_CASE("nse is invariant under positive affine transforms")
{
    Rng rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.01, 100.0), shift(-1000.0, 1000.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y(40), yh(40);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = 3.0 * u(rng);
            yh[i] = y[i] + 0.8 * u(rng);
        }
        const double a = scale(rng), b = shift(rng);
        std::vector<double> ya(y), yha(yh);
        for (std::size_t i = 0; i < y.size(); ++i) {
            ya[i] = a * y[i] + b;
            yha[i] = a * yh[i] + b;
        }
        CHECK(std::abs(nse(ya, yha) - nse(y, yh)) < 1e-9);
        CHECK(std::abs(nse(y, yh) - static_cast<double>(reference_nse(y, yh))) < 1e-12);
    }
}

TEST_CASE("windowed nse averages per-window scores")
{
    // Window A: obs (0,1,2,3), var sum 5; sse 3 -> 0.4. Window B: sse 1 -> 0.8.
    const std::vector<std::vector<double>> obs = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    const std::vector<std::vector<double>> sim = {{1, 2, 3, 3}, {0, 1, 2, 4}};
    const WindowedNse w = windowed_nse(obs, sim);
    CHECK(w.value == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(w.n_windows == 2);
    CHECK(w.n_skipped == 0);
}

TEST_CASE("windowed nse with one window equals nse")
{
    const std::vector<std::vector<double>> obs = {{0.5, 1.5, 0.2, 4.0}};
    const std::vector<std::vector<double>> sim = {{0.7, 1.1, 0.0, 3.0}};
    CHECK(windowed_nse(obs, sim).value == nse(obs[0], sim[0]));
    CHECK(pooled_nse(obs, sim) == nse(obs[0], sim[0]));
}

TEST_CASE("windowed nse of perfect forecasts is 1 and skips flat windows")
{
    const std::vector<std::vector<double>> obs = {{1, 2, 3}, {2, 2, 2}, {5, 1, 0}};
    const WindowedNse w = windowed_nse(obs, obs);
    CHECK(w.value == 1.0);
    CHECK(w.n_windows == 2);
    CHECK(w.n_skipped == 1);
    CHECK_THROWS_AS(windowed_nse({{2, 2}}, {{1, 3}}), UndefinedNseError);
}

TEST_CASE("pooled nse concatenates windows")
{
    const std::vector<std::vector<double>> obs = {{0, 1}, {2, 3}};
    const std::vector<std::vector<double>> sim = {{1, 2}, {3, 3}};
    CHECK(pooled_nse(obs, sim) == nse(std::vector<double>{0, 1, 2, 3}, std::vector<double>{1, 2, 3, 3}));
}

TEST_CASE("runoff ratio edge cases")
{
    BasinSeries s;
    s.basin_id = "r";
    s.driver_names = {"temp", "precip"};
    s.drivers = Matrix(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        s.timestamps.push_back(static_cast<Timestamp>(i) * 3600);
        s.drivers(i, 0) = 20.0;
        s.drivers(i, 1) = static_cast<double>(i + 1);
        s.response.push_back(static_cast<double>(i + 1));
    }
    CHECK(runoff_ratio(s, {0, 4}) == 1.0);
    s.response.assign(4, 0.0);
    CHECK(runoff_ratio(s, {0, 4}) == 0.0);
}

TEST_CASE("mean, median and rank correlation")
{
    CHECK(mean_of(std::vector<double>{0.5, 0.7, 0.9}) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(median_of({0.9, 0.5, 0.7}) == 0.7);
    CHECK(median_of({1.0, 4.0, 2.0, 3.0}) == 2.5);
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {10, 20, 30, 40, 50};
    const std::vector<double> c = {5, 4, 3, 2, 1};
    CHECK(rank_correlation(a, b) == doctest::Approx(1.0));
    CHECK(rank_correlation(a, c) == doctest::Approx(-1.0));
    // Ties get average ranks: b' ranks (1.5, 1.5, 3, 4, 5).
    const std::vector<double> tied = {1, 1, 3, 4, 5};
    CHECK(rank_correlation(a, tied) == doctest::Approx(0.9746794344808963));
}

TEST_CASE("summarize: {0.5, 0.7, 0.9} has mean and median 0.7")
{
    const EvalReport r = summarize({row("a", 0.5), row("b", 0.9), row("c", 0.7)});
    CHECK(r.mean_nse() == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(r.median_nse() == 0.7);
    REQUIRE(r.aggregates.size() == 2);
    CHECK(r.aggregates[0].basin_id == "__mean__");
    CHECK(r.aggregates[0].n_windows == 30);
    CHECK(r.aggregates[1].basin_id == "__median__");
}

TEST_CASE("summarize of one basin: mean = median = its nse")
{
    const EvalReport r = summarize({row("only", 0.42, 0.5)});
    CHECK(r.mean_nse() == 0.42);
    CHECK(r.median_nse() == 0.42);
    CHECK_THROWS_AS(summarize({}), DataError);
}

TEST_CASE("summarize is invariant to basin order")
{
    std::vector<ReportRow> rows = {row("a", 0.1, 0.3), row("b", -2.0, 0.9), row("c", 0.7, 0.2), row("d", 0.6, 0.8)};
    const EvalReport base = summarize(rows);
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.basin_id > y.basin_id; });
    CHECK(summarize(rows) == base);
    std::swap(rows[0], rows[2]);
    CHECK(summarize(rows) == base);
}

TEST_CASE("report csv round-trips losslessly")
{
    const auto dir = fhnn::testing::scratch_dir("metrics_report");
    const EvalReport r = summarize({row("a", 0.1 + 0.2, 1.0 / 3.0), row("b", -1e-300, 0.123456789012345678)});
    write_report((dir / "report.csv").string(), r);
    CHECK(read_report((dir / "report.csv").string()) == r);
    const auto lines = read_lines(dir / "report.csv");
    CHECK(lines[0] == "basin_id,horizon,n_windows,n_skipped,nse_windowed,nse_pooled,runoff_ratio");
    CHECK(lines.size() == 5);
    CHECK(lines[3].rfind("__mean__,", 0) == 0);
    CHECK(lines[4].rfind("__median__,", 0) == 0);
}

TEST_CASE("state export: T=720, m=4, s=28 gives 720 + 180 + 26 rows of 11-dim means")
{
    ModelConfig cfg;
    cfg.d_x = 2;
    cfg.h_enc = 11;
    cfg.input_length = 720;
    cfg.m = 4;
    cfg.s = 28;
    cfg.horizon = 28;
    FhnnModel model(cfg, 1);
    Rng rng(5);
    const LatentState st =
        model.encode(fhnn::testing::random_matrix(720, 2, rng), fhnn::testing::random_matrix(720, 1, rng));
    CHECK(st.fast.cols() == 11);
    const auto dir = fhnn::testing::scratch_dir("metrics_states");
    export_states(st, (dir / "states.csv").string());
    const auto lines = read_lines(dir / "states.csv");
    REQUIRE(lines.size() == 1 + 720 + 180 + 26);
    CHECK(lines[0] == "scale,step_index,original_time_index,mean_hidden_value");
    CHECK(lines[1].rfind("fast,0,0,", 0) == 0);
    CHECK(lines[720].rfind("fast,719,719,", 0) == 0);
    CHECK(lines[721].rfind("medium,0,", 0) == 0);
    CHECK(lines[900].rfind("medium,179,719,", 0) == 0);
    CHECK(lines.back().rfind("slow,25,719,", 0) == 0);

    // The mean column is the average over the hidden dimension.
    std::istringstream cells(lines[5]);
    std::string cell;
    for (int i = 0; i < 4; ++i)
        std::getline(cells, cell, ',');
    double m = 0.0;
    for (double v : st.fast.row(4))
        m += v;
    CHECK(std::stod(cell) == doctest::Approx(m / 11.0).epsilon(1e-15));
}

TEST_CASE("all-zero parameters export all-zero state means")
{
    ModelConfig cfg;
    cfg.d_x = 2;
    cfg.h_enc = 3;
    cfg.d_z = 6;
    cfg.mlp_hidden = 6;
    cfg.input_length = 12;
    cfg.m = 2;
    cfg.s = 4;
    cfg.horizon = 3;
    FhnnModel model(cfg, 1);
    fhnn::testing::zero_values(model.params());
    Rng rng(9);
    const LatentState st =
        model.encode(fhnn::testing::random_matrix(12, 2, rng), fhnn::testing::random_matrix(12, 1, rng));
    const auto dir = fhnn::testing::scratch_dir("metrics_states_zero");
    export_states(st, (dir / "states.csv").string());
    const auto lines = read_lines(dir / "states.csv");
    CHECK(lines.size() == 1 + 12 + 6 + 3);
    for (std::size_t i = 1; i < lines.size(); ++i)
        CHECK(std::stod(lines[i].substr(lines[i].rfind(',') + 1)) == 0.0);
}

TEST_CASE("svg plots are well-formed documents")
{
    PlotPanel panel{"NSE vs runoff ratio", "runoff ratio", "NSE", {{"basins", {0.1, 0.3, 0.5}, {0.6, 0.8, 0.9}, true}}};
    const std::string svg = render_svg({panel, panel}, 2, 800, 300);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("NSE vs runoff ratio") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
}

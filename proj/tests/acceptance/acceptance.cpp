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

// Acceptance suite: one PASS/FAIL line per criterion.

#include "grad_check.hpp"
#include "oracles.hpp"

#include "app/run_config.hpp"
#include "app/trends.hpp"
#include "data/windows.hpp"
#include "metrics/nse.hpp"
#include "model/fhnn_model.hpp"
#include "model/model_io.hpp"
#include "synth/catchment.hpp"
#include "synth/fleet.hpp"
#include "training/dataset.hpp"
#include "training/trainer.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>

using namespace fhnn;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1 -------------------------------------------------------------------------

Outcome gradient_exactness()
{
    const auto t0 = std::chrono::steady_clock::now();
    struct Case
    {
        const char* name;
        ModelKind kind;
        bool teacher;
    };
    const Case cases[] = {{"fhnn", ModelKind::fhnn, false},
                          {"fhnn_single", ModelKind::fhnn_single, false},
                          {"lstm", ModelKind::lstm, false},
                          {"lstm_ar", ModelKind::lstm_ar, false},
                          {"lstm_ar+teacher", ModelKind::lstm_ar, true}};
    bool ok = true;
    double worst = 0.0;
    std::size_t checked = 0, failures = 0;
    std::string failed;
    for (const auto& c : cases)
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            ModelConfig cfg = testing::tiny_config(c.kind);
            cfg.teacher_forcing = c.teacher;
            const GradCheck g = testing::model_gradient_check(cfg, seed, 1e-4, 1e-8);
            checked += g.checked;
            failures += g.failures;
            worst = std::max(worst, g.max_rel_error);
            if (!g.passed()) {
                ok = false;
                failed += fmt(" %s/seed%llu:%s[%zu]", c.name, static_cast<unsigned long long>(seed),
                              g.worst_param.c_str(), g.worst_index);
            }
        }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    return {ok, fmt("%zu entries over 5 model variants x 3 seeds, %zu outside rel 1e-4 / abs 1e-8 "
                    "(largest rel error %.2e), %.1fs%s",
                    checked, failures, worst, elapsed, failed.c_str())};
}

// 2 -------------------------------------------------------------------------

Outcome nse_oracles()
{
    bool ok = true;
    std::string notes;
    const std::vector<double> y = {1.0, 2.0, 3.0};
    ok &= nse(y, y) == 1.0;
    ok &= nse(y, std::vector<double>{2.0, 2.0, 2.0}) == 0.0;
    ok &= nse(y, std::vector<double>{1.0, 2.0, 4.0}) == 0.5;
    try {
        nse(std::vector<double>{4.0, 4.0}, std::vector<double>{1.0, 2.0});
        ok = false;
        notes += " constant-obs not rejected;";
    } catch (const UndefinedNseError&) {
    }
    const std::vector<std::vector<double>> obs = {{0, 1, 2, 3}, {0, 1, 2, 3}};
    const std::vector<std::vector<double>> sim = {{1, 2, 3, 3}, {0, 1, 2, 4}};
    ok &= std::abs(windowed_nse(obs, sim).value - 0.6) < 1e-15;
    ok &= windowed_nse({obs[0]}, {sim[1]}).value == nse(obs[0], sim[1]);

    Rng rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0), scale(0.01, 100.0), shift(-1e3, 1e3);
    double worst = 0.0, worst_ref = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(50), b(50);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = 5.0 * u(rng);
            b[i] = a[i] + u(rng);
        }
        const double s = scale(rng), c = shift(rng);
        std::vector<double> at(a), bt(b);
        for (std::size_t i = 0; i < a.size(); ++i) {
            at[i] = s * a[i] + c;
            bt[i] = s * b[i] + c;
        }
        const double base = nse(a, b);
        worst = std::max(worst, std::abs(nse(at, bt) - base));
        worst_ref = std::max(worst_ref, std::abs(base - static_cast<double>(testing::reference_nse(a, b))));
    }
    ok &= worst <= 1e-9 && worst_ref <= 1e-12;
    return {ok, fmt("worked examples exact; 100 affine transforms, max |dNSE| %.2e; library vs reference %.2e;%s",
                    worst, worst_ref, notes.c_str())};
}

// 3 -------------------------------------------------------------------------

Outcome overfit(std::size_t threads)
{
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc;
    rc.apply_preset("nws-ncrfc");
    FleetConfig fc;
    fc.n_basins = 1;
    fc.regime = "wet-flashy";
    fc.years = 4;
    fc.train_years = 2;
    fc.val_years = 1;
    fc.steps_per_year = 1460;
    fc.seed = 7;
    const Fleet fleet = make_fleet(fc);
    const ModelConfig mc = rc.model_config(2);
    DataOptions opts;
    opts.window = {mc.input_length, mc.horizon, 7};
    opts.eval_stride = 28;
    PreparedBasin pb = prepare_basin(fleet.basins[0].series, fleet.split, opts);
    if (pb.train_starts.size() < 200)
        return {false, fmt("only %zu training windows available", pb.train_starts.size())};
    pb.train_starts.resize(200);

    TrainConfig tc = rc.train_config();
    tc.lr = 0.005;
    tc.batch_size = 20;
    tc.max_epochs = 500;
    tc.patience = 500;
    tc.seed = 1;
    tc.select_on_train = true;
    tc.select_windowed = true;
    tc.target_score = 0.95;
    tc.threads = threads;
    const TrainResult r = train_local(mc, pb, opts.window, tc);
    const auto pred = predict_basin({r.model.get()}, pb, opts.window, pb.train_starts);
    const double score = windowed_nse(pred.observed, pred.predicted).value;
    const double elapsed = seconds_since(t0);
    const bool ok = score >= 0.95 && elapsed < 600.0;
    return {ok, fmt("T=%zu K=%zu h_enc=%zu d_z=%zu, 200 windows: train windowed NSE %.4f after %zu epochs, "
                    "%.0fs (%zu thread%s)",
                    mc.input_length, mc.horizon, mc.h_enc, mc.d_z, score, r.history.epochs(), elapsed, threads,
                    threads == 1 ? "" : "s")};
}

// 4-6, 8 ---------------------------------------------------------------------

template <class Rows, class Field>
double median_field(const Rows& rows, Field field)
{
    std::vector<double> v;
    for (const auto& r : rows)
        v.push_back(field(r));
    return median_of(v);
}

Outcome memory_trend(const TrendsResult& t)
{
    const double f = median_field(t.memory, [](auto& r) { return r.fhnn.nse_pooled; });
    const double a = median_field(t.memory, [](auto& r) { return r.lstm_ar.nse_pooled; });
    const bool ok = f >= a && t.gain_low_runoff > t.gain_high_runoff && t.memory_rank_correlation < 0.0;
    return {ok, fmt("median NSE fhnn %.4f vs lstm_ar %.4f; mean gain low-runoff half %+.4f, high half %+.4f; "
                    "rank corr(gain, runoff ratio) %+.3f",
                    f, a, t.gain_low_runoff, t.gain_high_runoff, t.memory_rank_correlation)};
}

Outcome pretrain_benefit(const TrendsResult& t)
{
    const double scratch = median_field(t.pretrain, [](auto& r) { return r.scratch_limited.nse_pooled; });
    const double tuned = median_field(t.pretrain, [](auto& r) { return r.pretrained_finetuned.nse_pooled; });
    const double all = median_field(t.pretrain, [](auto& r) { return r.scratch_all.nse_pooled; });
    const bool ok = t.pretrain.size() >= 5 && tuned >= scratch + 0.02 && tuned >= all - 0.10;
    return {ok, fmt("%zu basins: median NSE scratch(limited) %.4f, pretrained+finetuned %.4f (needs >= %.4f), "
                    "all-data %.4f (needs within 0.10)",
                    t.pretrain.size(), scratch, tuned, scratch + 0.02, all)};
}

Outcome global_trend(const TrendsResult& t)
{
    const double fl = median_field(t.global, [](auto& r) { return r.fhnn_local.nse_pooled; });
    const double fg = median_field(t.global, [](auto& r) { return r.fhnn_global.nse_pooled; });
    const double al = median_field(t.global, [](auto& r) { return r.lstm_ar_local.nse_pooled; });
    const double ag = median_field(t.global, [](auto& r) { return r.lstm_ar_global.nse_pooled; });
    const bool ok = fg >= fl && ag >= al && fg >= ag;
    return {ok, fmt("median NSE fhnn local %.4f -> global %.4f; lstm_ar local %.4f -> global %.4f", fl, fg, al, ag)};
}

Outcome ensemble_property(const TrendsResult& t)
{
    std::size_t bad = 0;
    double margin = std::numeric_limits<double>::infinity();
    std::string first_bad;
    for (const auto& e : t.ensembles) {
        if (!(e.ensemble_mse <= e.mean_member_mse)) {
            if (!bad)
                first_bad = " first violation: " + e.label;
            ++bad;
        }
        margin = std::min(margin, e.mean_member_mse - e.ensemble_mse);
    }
    return {bad == 0 && !t.ensembles.empty(),
            fmt("%zu evaluation sets, %zu violations, smallest margin %.3e%s", t.ensembles.size(), bad, margin,
                first_bad.c_str())};
}

// 7 -------------------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Byte comparison of every file under two run directories except the config
// snapshot, which records the differing output path.
bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files, std::string& diff)
{
    std::set<fs::path> names;
    for (const auto* root : {&a, &b})
        for (const auto& e : fs::recursive_directory_iterator(*root))
            if (e.is_regular_file())
                names.insert(fs::relative(e.path(), *root));
    files = 0;
    for (const auto& n : names) {
        if (n.filename() == "config.txt")
            continue;
        ++files;
        if (!fs::exists(a / n) || !fs::exists(b / n) || slurp(a / n) != slurp(b / n)) {
            diff = n.string();
            return false;
        }
    }
    return true;
}

Outcome structural(const fs::path& work, std::size_t threads)
{
    bool ok = true;
    std::string notes;

    // Trajectory lengths.
    Rng rng(3);
    std::size_t shapes = 0;
    for (std::size_t T : {4, 7, 8, 28, 30, 121})
        for (auto [m, s] : {std::pair<std::size_t, std::size_t>{2, 4}, {3, 7}, {4, 28}}) {
            if (s > T)
                continue;
            ModelConfig mc = testing::tiny_config(ModelKind::fhnn);
            mc.input_length = T;
            mc.m = m;
            mc.s = s;
            FhnnModel model(mc, 1);
            const LatentState st =
                model.encode(testing::random_matrix(T, mc.d_x, rng), testing::random_matrix(T, 1, rng));
            const bool good = st.fast.rows() == T && st.medium.rows() == testing::downsampled_length(T, m) &&
                              st.slow.rows() == testing::downsampled_length(T, s);
            ok &= good;
            ++shapes;
            if (!good)
                notes += fmt(" trajectory T=%zu m=%zu s=%zu;", T, m, s);
        }

    // Window counts.
    std::size_t counts = 0;
    for (std::size_t n = 20; n < 90; n += 7)
        for (std::size_t stride : {1, 2, 5}) {
            BasinSeries bs;
            bs.basin_id = "w";
            bs.driver_names = {"precip", "temp"};
            bs.drivers = Matrix(n, 2);
            bs.response.assign(n, 1.0);
            for (std::size_t i = 0; i < n; ++i)
                bs.timestamps.push_back(static_cast<Timestamp>(i) * 3600);
            const WindowSpec spec{12, 5, stride};
            const bool good = make_windows(bs, spec).size() == (n - 17) / stride + 1;
            ok &= good;
            ++counts;
            if (!good)
                notes += fmt(" window count n=%zu stride=%zu;", n, stride);
        }

    // Mass balance of every basin of the default fleet.
    FleetConfig fc;
    const Fleet fleet = make_fleet(fc);
    double worst_mass = 0.0;
    for (const auto& b : fleet.basins) {
        const CatchmentStores init{5.0, 40.0, 3.0, 25.0};
        const auto r = simulate(b.series.drivers, b.truth, init);
        double in = init.total(), out = r.final.total();
        for (std::size_t t = 0; t < r.flow.size(); ++t) {
            in += b.series.drivers(t, 0);
            out += r.flow[t] + r.et[t];
        }
        worst_mass = std::max(worst_mass, std::abs(in - out) / in);
    }
    ok &= worst_mass <= 1e-8;

    // Checkpoint round trip.
    bool ckpt_ok = true;
    for (auto kind : {ModelKind::fhnn, ModelKind::fhnn_single, ModelKind::lstm, ModelKind::lstm_ar}) {
        const auto model = make_forecaster(testing::tiny_config(kind), 11);
        const fs::path p1 = work / "ckpt_a.bin", p2 = work / "ckpt_b.bin";
        save_model(p1.string(), *model, {{"note", "round trip"}});
        const LoadedModel back = load_model(p1.string());
        save_model(p2.string(), *back.model, {{"note", "round trip"}});
        ckpt_ok &= back.model->params().values_equal(model->params()) && slurp(p1) == slurp(p2);
    }
    ok &= ckpt_ok;
    if (!ckpt_ok)
        notes += " checkpoint round trip;";

    // Fixed-seed reruns of the trends recipe on a reduced fleet.
    const auto t0 = std::chrono::steady_clock::now();
    std::array<fs::path, 2> dirs = {work / "rerun_a", work / "rerun_b"};
    for (const auto& d : dirs) {
        RunConfig rc;
        rc.apply_preset("desk");
        for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
                 {"fleet_basins", "4"}, {"fleet_years", "5"}, {"fleet_train_years", "3"}, {"fleet_val_years", "1"},
                 {"T_in", "60"}, {"max_epochs", "2"}, {"trends_ensemble", "2"}, {"train_stride", "4"},
                 {"eval_stride", "2"}, {"verbose", "0"}, {"threads", std::to_string(threads)}})
            rc.set(k, v);
        rc.set("out", d.string());
        fs::remove_all(d);
        cmd_trends(rc);
    }
    std::size_t files = 0;
    std::string diff;
    const bool same = same_tree(dirs[0], dirs[1], files, diff);
    ok &= same;
    if (!same)
        notes += " trends rerun differs in " + diff + ";";

    return {ok, fmt("%zu trajectory shapes, %zu window counts, mass balance worst rel %.1e, checkpoints bit-exact, "
                    "trends rerun %zu files identical (%.0fs);%s",
                    shapes, counts, worst_mass, files, seconds_since(t0), notes.c_str())};
}

void print(int id, const char* name, const Outcome& o)
{
    std::printf("criterion %d %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite: prints one PASS/FAIL line per criterion"};
    std::vector<int> only;
    std::string out = (fs::temp_directory_path() / "fhnn_acceptance").string();
    std::size_t threads = 1;
    bool verbose = false;
    app.add_option("--only", only, "criteria to run (default all)")->check(CLI::Range(1, 8));
    app.add_option("--out", out, "scratch and trends output directory");
    app.add_option("--threads", threads, "worker threads for the training-based criteria");
    app.add_flag("-v,--verbose", verbose, "trends progress on stderr");
    CLI11_PARSE(app, argc, argv);

    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    const fs::path work = out;
    fs::create_directories(work);
    int failures = 0;
    auto run = [&](int id, const char* name, auto&& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        print(id, name, o);
        failures += !o.pass;
    };

    if (wanted(1))
        run(1, "gradient exactness", [] { return gradient_exactness(); });
    if (wanted(2))
        run(2, "NSE oracles", [] { return nse_oracles(); });
    if (wanted(3))
        run(3, "overfit sanity", [&] { return overfit(threads); });

    if (wanted(4) || wanted(5) || wanted(6) || wanted(8)) {
        std::optional<TrendsResult> trends;
        std::string error;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            RunConfig rc;
            rc.apply_preset("desk");
            rc.set("out", (work / "trends").string());
            rc.set("threads", std::to_string(threads));
            rc.set("verbose", verbose ? "1" : "0");
            LogFn log;
            if (verbose)
                log = [](const std::string& line) { std::fprintf(stderr, "[trends] %s\n", line.c_str()); };
            trends = cmd_trends(rc, log);
        } catch (const std::exception& e) {
            error = e.what();
        }
        std::printf("desk trends recipe: %s in %.0fs, outputs in %s\n", trends ? "completed" : "failed",
                    seconds_since(t0), (work / "trends").string().c_str());
        auto from_trends = [&](auto fn) {
            return [&, fn] { return trends ? fn(*trends) : Outcome{false, "trends recipe failed: " + error}; };
        };
        if (wanted(4))
            run(4, "memory-advantage trend", from_trends(memory_trend));
        if (wanted(5))
            run(5, "pretraining benefit", from_trends(pretrain_benefit));
        if (wanted(6))
            run(6, "global-vs-local trend", from_trends(global_trend));
        if (wanted(8))
            run(8, "ensemble property", from_trends(ensemble_property));
    }
    if (wanted(7))
        run(7, "structural invariants", [&] { return structural(work, threads); });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

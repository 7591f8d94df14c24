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

#include "app/trends.hpp"

#include "metrics/nse.hpp"
#include "metrics/report.hpp"
#include "metrics/svg_plot.hpp"
#include "model/fhnn_model.hpp"
#include "numerics/errors.hpp"
#include "synth/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace fhnn {

namespace fs = std::filesystem;

namespace {

using Members = std::vector<EnsembleMember>;

double mse_of(const std::vector<std::vector<double>>& obs, const std::vector<std::vector<double>>& pred)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t w = 0; w < obs.size(); ++w)
        for (std::size_t k = 0; k < obs[w].size(); ++k) {
            sum += (pred[w][k] - obs[w][k]) * (pred[w][k] - obs[w][k]);
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

EnsembleScore score(const std::vector<const Forecaster*>& members, const PreparedBasin& pb, const WindowSpec& spec,
                    std::size_t basin_index, std::size_t threads)
{
    EnsembleScore s;
    const auto pred = predict_basin(members, pb, spec, pb.test_starts, basin_index, threads);
    s.nse_pooled = pooled_nse(pred.observed, pred.predicted);
    try {
        s.nse_windowed = windowed_nse(pred.observed, pred.predicted).value;
    } catch (const UndefinedNseError&) {
        s.nse_windowed = std::nan("");
    }
    s.ensemble_mse = mse_of(pred.observed, pred.predicted);
    double member_sum = 0.0;
    for (const auto* m : members) {
        const auto single = predict_basin({m}, pb, spec, pb.test_starts, basin_index, threads);
        member_sum += mse_of(single.observed, single.predicted);
    }
    s.mean_member_mse = member_sum / static_cast<double>(members.size());
    return s;
}

std::string f4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string full(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw IoError("cannot write '" + path.string() + "'");
}

double median_by(const std::vector<double>& v) { return median_of(v); }

} // namespace

TrendsResult cmd_trends(const RunConfig& cfg, const LogFn& log)
{
    auto say = [&](const std::string& line) {
        if (log)
            log(line);
    };
    const fs::path out = cfg.str("out");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
        throw IoError("cannot create '" + out.string() + "': " + ec.message());
    cfg.write_snapshot((out / "config.txt").string());

    const FleetConfig fc = cfg.fleet_config();
    const Fleet fleet = make_fleet(fc);
    write_fleet((out / "fleet").string(), fleet);
    const std::size_t n = fleet.basins.size();
    if (n < 2)
        throw ConfigError("trends needs at least two basins");

    const WindowSpec spec = cfg.window_spec();
    TrainConfig tc = cfg.train_config();
    tc.log = cfg.count("verbose") > 1 ? log : LogFn{};
    const std::size_t k = std::max<std::size_t>(1, cfg.count("trends_ensemble"));
    const std::size_t threads = tc.threads;
    const std::size_t spy = fc.steps_per_year;
    const std::size_t limited_steps = cfg.count("trends_limited_years") * spy;
    const std::size_t global_steps = cfg.count("trends_global_years") * spy;
    if (limited_steps == 0 || global_steps == 0)
        throw ConfigError("trends_limited_years and trends_global_years must be positive");

    DataOptions opts = cfg.data_options();
    opts.use_sim = false;
    opts.train_steps = 0;

    RunConfig fhnn_cfg = cfg;
    fhnn_cfg.set("model", "fhnn");
    RunConfig ar_cfg = cfg;
    ar_cfg.set("model", "lstm_ar");
    const ModelConfig mc_fhnn = fhnn_cfg.model_config(2);
    const ModelConfig mc_ar = ar_cfg.model_config(2);

    TrendsResult result;
    auto record = [&](const std::string& label, const EnsembleScore& s) {
        result.ensembles.push_back({label, s.ensemble_mse, s.mean_member_mse});
    };
    std::vector<Members> fhnn_all(n);

    // Memory advantage: all training years, local models.
    for (std::size_t b = 0; b < n; ++b) {
        const auto& fb = fleet.basins[b];
        const PreparedBasin pb = prepare_basin(fb.series, fleet.split, opts);
        say("memory table: basin " + pb.id + " (" + std::to_string(pb.train_starts.size()) + " windows)");
        fhnn_all[b] = train_ensemble(k, tc, [&](const TrainConfig& c) { return train_local(mc_fhnn, pb, spec, c); });
        const Members ar =
            train_ensemble(k, tc, [&](const TrainConfig& c) { return train_local(mc_ar, pb, spec, c); });
        TrendsResult::MemoryRow row;
        row.basin = pb.id;
        row.runoff_ratio = fb.runoff_ratio;
        row.fhnn = score(survivors(fhnn_all[b]), pb, spec, 0, threads);
        row.lstm_ar = score(survivors(ar), pb, spec, 0, threads);
        record("memory/" + pb.id + "/fhnn", row.fhnn);
        record("memory/" + pb.id + "/lstm_ar", row.lstm_ar);
        say("  fhnn " + f4(row.fhnn.nse_pooled) + "  lstm_ar " + f4(row.lstm_ar.nse_pooled));
        result.memory.push_back(row);
    }

    // Pretraining on simulated flow, then fine-tuning on the last years.
    for (std::size_t b = 0; b < n; ++b) {
        const auto& fb = fleet.basins[b];
        DataOptions sim_opts = opts;
        sim_opts.use_sim = true;
        const PreparedBasin sim = prepare_basin(fb.series, fleet.split, sim_opts);
        DataOptions limited_opts = opts;
        limited_opts.train_steps = limited_steps;
        const PreparedBasin obs_sim_stats = prepare_basin(fb.series, fleet.split, opts, sim.stats);
        const PreparedBasin limited_sim_stats = prepare_basin(fb.series, fleet.split, limited_opts, sim.stats);
        const PreparedBasin limited = prepare_basin(fb.series, fleet.split, limited_opts);
        say("pretrain table: basin " + sim.id);

        const Members pre =
            train_ensemble(k, tc, [&](const TrainConfig& c) { return train_local(mc_fhnn, sim, spec, c); });
        const auto pre_alive = survivors(pre);
        const Members tuned = train_ensemble(k, tc, [&](const TrainConfig& c) {
            const auto& base = pre.at(c.seed - tc.seed);
            if (!base.model)
                throw DivergenceError("pretrained member diverged");
            return finetune(*base.model, limited_sim_stats, spec, c);
        });
        const Members scratch =
            train_ensemble(k, tc, [&](const TrainConfig& c) { return train_local(mc_fhnn, limited, spec, c); });

        TrendsResult::PretrainRow row;
        row.basin = sim.id;
        row.runoff_ratio = fb.runoff_ratio;
        row.pretrained_vs_sim = score(pre_alive, sim, spec, 0, threads);
        row.pretrained_vs_obs = score(pre_alive, obs_sim_stats, spec, 0, threads);
        row.pretrained_finetuned = score(survivors(tuned), limited_sim_stats, spec, 0, threads);
        row.scratch_limited = score(survivors(scratch), limited, spec, 0, threads);
        row.scratch_all = result.memory[b].fhnn;
        record("pretrain/" + sim.id + "/finetuned", row.pretrained_finetuned);
        record("pretrain/" + sim.id + "/scratch_limited", row.scratch_limited);
        say("  scratch " + f4(row.scratch_limited.nse_pooled) + "  pretrained+finetuned " +
            f4(row.pretrained_finetuned.nse_pooled) + "  all data " + f4(row.scratch_all.nse_pooled));
        result.pretrain.push_back(row);
    }

    // Global vs local with a short record per basin.
    {
        DataOptions short_opts = opts;
        short_opts.train_steps = global_steps;
        std::vector<PreparedBasin> local, pooled;
        for (std::size_t b = 0; b < n; ++b) {
            local.push_back(prepare_basin(fleet.basins[b].series, fleet.split, short_opts));
            pooled.push_back(prepare_basin(fleet.basins[b].series, fleet.split, short_opts, std::nullopt,
                                           std::make_pair(b, n)));
        }
        ModelConfig g_fhnn = mc_fhnn, g_ar = mc_ar;
        g_fhnn.d_x = g_ar.d_x = 2 + n;
        say("global table: pooled training over " + std::to_string(n) + " basins");
        const Members gf =
            train_ensemble(k, tc, [&](const TrainConfig& c) { return train_global(g_fhnn, pooled, spec, c); });
        const Members ga =
            train_ensemble(k, tc, [&](const TrainConfig& c) { return train_global(g_ar, pooled, spec, c); });
        for (std::size_t b = 0; b < n; ++b) {
            say("global table: local models for basin " + local[b].id);
            const Members lf = train_ensemble(
                k, tc, [&](const TrainConfig& c) { return train_local(mc_fhnn, local[b], spec, c); });
            const Members la =
                train_ensemble(k, tc, [&](const TrainConfig& c) { return train_local(mc_ar, local[b], spec, c); });
            TrendsResult::GlobalRow row;
            row.basin = local[b].id;
            row.runoff_ratio = fleet.basins[b].runoff_ratio;
            row.fhnn_local = score(survivors(lf), local[b], spec, 0, threads);
            row.lstm_ar_local = score(survivors(la), local[b], spec, 0, threads);
            row.fhnn_global = score(survivors(gf), pooled[b], spec, b, threads);
            row.lstm_ar_global = score(survivors(ga), pooled[b], spec, b, threads);
            record("global/" + row.basin + "/fhnn_local", row.fhnn_local);
            record("global/" + row.basin + "/fhnn_global", row.fhnn_global);
            record("global/" + row.basin + "/lstm_ar_local", row.lstm_ar_local);
            record("global/" + row.basin + "/lstm_ar_global", row.lstm_ar_global);
            say("  fhnn local " + f4(row.fhnn_local.nse_pooled) + " global " + f4(row.fhnn_global.nse_pooled) +
                "  lstm_ar local " + f4(row.lstm_ar_local.nse_pooled) + " global " +
                f4(row.lstm_ar_global.nse_pooled));
            result.global.push_back(row);
        }
    }

    // Orderings.
    std::vector<double> gains, ratios;
    for (const auto& r : result.memory) {
        gains.push_back(r.gain());
        ratios.push_back(r.runoff_ratio);
    }
    result.memory_rank_correlation = rank_correlation(gains, ratios);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratios[a] < ratios[b]; });
    const std::size_t half = n / 2;
    double low = 0.0, high = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        low += gains[order[i]];
        high += gains[order[n - 1 - i]];
    }
    result.gain_low_runoff = low / static_cast<double>(half);
    result.gain_high_runoff = high / static_cast<double>(half);

    // Tables.
    std::string memory_csv = "basin_id,runoff_ratio,fhnn_nse_pooled,lstm_ar_nse_pooled,gain,fhnn_nse_windowed,"
                             "lstm_ar_nse_windowed\n";
    for (const auto& r : result.memory)
        memory_csv += r.basin + "," + f4(r.runoff_ratio) + "," + f4(r.fhnn.nse_pooled) + "," +
                      f4(r.lstm_ar.nse_pooled) + "," + f4(r.gain()) + "," + f4(r.fhnn.nse_windowed) + "," +
                      f4(r.lstm_ar.nse_windowed) + "\n";
    write_text(out / "trends_memory.csv", memory_csv);

    std::string pre_csv = "basin_id,runoff_ratio,scratch_limited,pretrained_finetuned,scratch_all,"
                          "pretrained_vs_sim,pretrained_vs_obs\n";
    for (const auto& r : result.pretrain)
        pre_csv += r.basin + "," + f4(r.runoff_ratio) + "," + f4(r.scratch_limited.nse_pooled) + "," +
                   f4(r.pretrained_finetuned.nse_pooled) + "," + f4(r.scratch_all.nse_pooled) + "," +
                   f4(r.pretrained_vs_sim.nse_pooled) + "," + f4(r.pretrained_vs_obs.nse_pooled) + "\n";
    write_text(out / "trends_pretrain.csv", pre_csv);

    std::string global_csv = "basin_id,runoff_ratio,fhnn_local,fhnn_global,lstm_ar_local,lstm_ar_global\n";
    for (const auto& r : result.global)
        global_csv += r.basin + "," + f4(r.runoff_ratio) + "," + f4(r.fhnn_local.nse_pooled) + "," +
                      f4(r.fhnn_global.nse_pooled) + "," + f4(r.lstm_ar_local.nse_pooled) + "," +
                      f4(r.lstm_ar_global.nse_pooled) + "\n";
    write_text(out / "trends_global.csv", global_csv);

    std::string ens_csv = "evaluation_set,ensemble_mse,mean_member_mse\n";
    for (const auto& e : result.ensembles)
        ens_csv += e.label + "," + full(e.ensemble_mse) + "," + full(e.mean_member_mse) + "\n";
    write_text(out / "trends_ensemble.csv", ens_csv);

    auto med = [](const auto& rows, auto field) {
        std::vector<double> v;
        for (const auto& r : rows)
            v.push_back(field(r));
        return median_by(v);
    };
    std::string summary;
    summary += "memory: median fhnn " + f4(med(result.memory, [](auto& r) { return r.fhnn.nse_pooled; })) +
               ", median lstm_ar " + f4(med(result.memory, [](auto& r) { return r.lstm_ar.nse_pooled; })) +
               ", rank correlation gain~runoff " + f4(result.memory_rank_correlation) + ", mean gain low half " +
               f4(result.gain_low_runoff) + ", high half " + f4(result.gain_high_runoff) + "\n";
    summary += "pretrain: median scratch " +
               f4(med(result.pretrain, [](auto& r) { return r.scratch_limited.nse_pooled; })) +
               ", pretrained+finetuned " +
               f4(med(result.pretrain, [](auto& r) { return r.pretrained_finetuned.nse_pooled; })) + ", all data " +
               f4(med(result.pretrain, [](auto& r) { return r.scratch_all.nse_pooled; })) + "\n";
    summary += "global: median fhnn local " + f4(med(result.global, [](auto& r) { return r.fhnn_local.nse_pooled; })) +
               ", fhnn global " + f4(med(result.global, [](auto& r) { return r.fhnn_global.nse_pooled; })) +
               ", lstm_ar local " + f4(med(result.global, [](auto& r) { return r.lstm_ar_local.nse_pooled; })) +
               ", lstm_ar global " + f4(med(result.global, [](auto& r) { return r.lstm_ar_global.nse_pooled; })) +
               "\n";
    write_text(out / "trends_summary.txt", summary);
    say(summary);

    // Plots.
    {
        PlotSeries pts{"basins", {}, {}, true};
        for (const auto& r : result.memory) {
            pts.x.push_back(r.runoff_ratio);
            pts.y.push_back(r.gain());
        }
        write_svg((out / "gain_vs_runoff_ratio.svg").string(),
                  {{"FHNN gain over LSTM-AR", "runoff ratio", "NSE gain", {pts}}});

        const double years_all = static_cast<double>(fc.train_years);
        const double years_limited = static_cast<double>(cfg.count("trends_limited_years"));
        const double years_short = static_cast<double>(cfg.count("trends_global_years"));
        std::vector<PlotSeries> curves;
        for (std::size_t b = 0; b < n; ++b) {
            PlotSeries s{result.memory[b].basin, {}, {}, false};
            const std::pair<double, double> pts_b[] = {
                {years_short, result.global[b].fhnn_local.nse_pooled},
                {years_limited, result.pretrain[b].scratch_limited.nse_pooled},
                {years_all, result.memory[b].fhnn.nse_pooled}};
            std::vector<std::pair<double, double>> sorted(std::begin(pts_b), std::end(pts_b));
            std::sort(sorted.begin(), sorted.end());
            for (const auto& [x, y] : sorted) {
                s.x.push_back(x);
                s.y.push_back(y);
            }
            curves.push_back(std::move(s));
        }
        write_svg((out / "nse_vs_training_years.svg").string(),
                  {{"FHNN test NSE by training record", "training years", "NSE", curves}});

        std::vector<PlotPanel> panels;
        for (std::size_t b = 0; b < n; ++b) {
            const auto alive = survivors(fhnn_all[b]);
            const auto* model = dynamic_cast<const FhnnModel*>(alive.front());
            const PreparedBasin pb = prepare_basin(fleet.basins[b].series, fleet.split, opts);
            const std::size_t start = pb.test_starts.empty() ? 0 : pb.test_starts.back();
            const Window w = pb.window(spec, start);
            const LatentState st = model->encode(w.x_hist, w.y_hist);
            export_states(st, (out / ("states_" + pb.id + ".csv")).string());
            auto add = [&](const char* name, const Matrix& traj, const std::vector<std::size_t>& index) {
                PlotSeries s{name, {}, {}, false};
                for (std::size_t i = 0; i < traj.rows(); ++i) {
                    double sum = 0.0;
                    for (double v : traj.row(i))
                        sum += v;
                    s.x.push_back(static_cast<double>(index[i]));
                    s.y.push_back(sum / static_cast<double>(traj.cols()));
                }
                panels.push_back({pb.id + " " + name, "history step", "mean hidden", {s}});
            };
            add("fast", st.fast, st.fast_index);
            add("medium", st.medium, st.medium_index);
            add("slow", st.slow, st.slow_index);
        }
        write_svg((out / "states.svg").string(), panels, 3);
    }
    return result;
}

} // namespace fhnn

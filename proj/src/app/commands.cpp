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

#include "app/commands.hpp"

#include "data/manifest.hpp"
#include "metrics/nse.hpp"
#include "metrics/svg_plot.hpp"
#include "model/fhnn_model.hpp"
#include "model/model_io.hpp"
#include "numerics/errors.hpp"
#include "synth/fleet.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>

namespace fhnn {

namespace fs = std::filesystem;

namespace {

enum class Regime { local, global, pretrain, finetune };

void say(const LogFn& log, const std::string& line)
{
    if (log)
        log(line);
}

fs::path prepare_out(const RunConfig& cfg)
{
    const fs::path out = cfg.str("out");
    if (out.empty())
        throw ConfigError("config key 'out' is empty");
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
        throw IoError("cannot create '" + out.string() + "': " + ec.message());
    cfg.write_snapshot((out / "config.txt").string());
    return out;
}

Manifest load_dataset(const RunConfig& cfg)
{
    const std::string path = cfg.str("manifest");
    if (path.empty())
        throw ConfigError("config key 'manifest' is required for this command");
    if (!fs::exists(path))
        throw ConfigError("config key 'manifest': '" + path + "' does not exist");
    Manifest m = read_manifest(path);
    if (!cfg.str("train_end").empty())
        m.split.train_end = parse_timestamp(cfg.str("train_end"));
    if (!cfg.str("val_end").empty())
        m.split.val_end = parse_timestamp(cfg.str("val_end"));
    if (!cfg.str("test_end").empty())
        m.split.test_end = parse_timestamp(cfg.str("test_end"));
    m.split.validate();
    return m;
}

std::vector<Manifest::Entry> selected_basins(const RunConfig& cfg, const Manifest& m)
{
    const auto wanted = cfg.list("basins");
    if (wanted.empty())
        return m.basins;
    std::vector<Manifest::Entry> out;
    for (const auto& id : wanted)
        out.push_back(m.find(id));
    return out;
}

std::size_t steps_per_year(const BasinSeries& s)
{
    const std::int64_t step = s.step_seconds();
    if (step <= 0)
        throw DataError("basin '" + s.basin_id + "' needs at least two rows");
    return static_cast<std::size_t>(365 * 86400 / step);
}

DataOptions options_for(const RunConfig& cfg, const BasinSeries& s, Regime regime)
{
    DataOptions opts = cfg.data_options();
    opts.use_sim = regime == Regime::pretrain;
    opts.train_steps = cfg.count("train_years") * steps_per_year(s);
    return opts;
}

std::string member_file(std::size_t i) { return "member_" + std::to_string(i) + ".ckpt"; }

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (const auto& s : items)
        out += (out.empty() ? "" : ",") + s;
    return out;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

Metadata merge(Metadata a, const Metadata& b)
{
    a.insert(b.begin(), b.end());
    return a;
}

// Loads every member of `dir` when all k exist; otherwise trains them.
std::vector<EnsembleMember> fit_or_load(const fs::path& dir, std::size_t k, const TrainConfig& tc,
                                        const std::function<TrainResult(const TrainConfig&)>& train_one,
                                        const Metadata& meta, const LogFn& log)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    bool all = true;
    for (std::size_t i = 0; i < k; ++i)
        all = all && fs::exists(dir / member_file(i));
    std::vector<EnsembleMember> members;
    if (all) {
        say(log, "reusing " + std::to_string(k) + " checkpoints in " + dir.string());
        for (std::size_t i = 0; i < k; ++i) {
            EnsembleMember m;
            m.model = load_model((dir / member_file(i)).string()).model;
            members.push_back(std::move(m));
        }
        return members;
    }
    members = train_ensemble(k, tc, train_one);
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (!members[i].error.empty()) {
            say(log, "member " + std::to_string(i) + " diverged: " + members[i].error);
            continue;
        }
        Metadata m = meta;
        m["run.member"] = std::to_string(i);
        m["run.seed"] = std::to_string(tc.seed + i);
        m["run.best_epoch"] = std::to_string(members[i].history.best_epoch);
        save_model((dir / member_file(i)).string(), *members[i].model, m);
        members[i].history.write_csv((dir / ("history_" + std::to_string(i) + ".csv")).string());
    }
    return members;
}

struct LoadedRun
{
    std::vector<std::unique_ptr<Forecaster>> models;
    Metadata meta; // of the first member
};

LoadedRun load_members(const fs::path& dir)
{
    LoadedRun run;
    for (std::size_t i = 0; fs::exists(dir / member_file(i)); ++i) {
        auto loaded = load_model((dir / member_file(i)).string());
        if (i == 0)
            run.meta = loaded.metadata;
        run.models.push_back(std::move(loaded.model));
    }
    if (run.models.empty())
        throw DataError("no member checkpoints in '" + dir.string() + "'");
    return run;
}

std::vector<const Forecaster*> pointers(const std::vector<std::unique_ptr<Forecaster>>& models)
{
    std::vector<const Forecaster*> out;
    for (const auto& m : models)
        out.push_back(m.get());
    return out;
}

ReportRow evaluate_rows(const std::vector<const Forecaster*>& members, const PreparedBasin& pb,
                        const WindowSpec& spec, const BasinSeries& series, std::size_t basin_index,
                        std::size_t threads)
{
    ReportRow row;
    row.basin_id = pb.id;
    row.horizon = spec.horizon;
    row.runoff_ratio = runoff_ratio(series, {0, series.length()});
    const auto pred = predict_basin(members, pb, spec, pb.test_starts, basin_index, threads);
    try {
        const auto w = windowed_nse(pred.observed, pred.predicted);
        row.nse_windowed = w.value;
        row.n_windows = w.n_windows;
        row.n_skipped = w.n_skipped;
    } catch (const UndefinedNseError&) {
        row.nse_windowed = std::nan("");
        row.n_skipped = pred.observed.size();
    }
    try {
        row.nse_pooled = pooled_nse(pred.observed, pred.predicted);
    } catch (const UndefinedNseError&) {
        row.nse_pooled = std::nan("");
    }
    return row;
}

void plot_report(const EvalReport& report, const fs::path& path)
{
    // Windowed scores can reach -1e6 on flat windows; clip so pooled stays readable.
    PlotSeries windowed{"windowed (clipped at -1)", {}, {}, true};
    PlotSeries pooled{"pooled", {}, {}, true};
    for (const auto& r : report.rows) {
        windowed.x.push_back(r.runoff_ratio);
        windowed.y.push_back(std::max(r.nse_windowed, -1.0));
        pooled.x.push_back(r.runoff_ratio);
        pooled.y.push_back(r.nse_pooled);
    }
    write_svg(path.string(), {{"Test NSE by basin", "runoff ratio", "NSE", {pooled, windowed}}});
}

EvalReport run_training(const RunConfig& cfg, Regime regime, const LogFn& log)
{
    const fs::path out = prepare_out(cfg);
    const Manifest manifest = load_dataset(cfg);
    const auto entries = selected_basins(cfg, manifest);
    const std::size_t k = std::max<std::size_t>(1, cfg.count("ensemble"));
    TrainConfig tc = cfg.train_config();
    tc.log = cfg.count("verbose") > 1 ? log : LogFn{};
    const WindowSpec spec = cfg.window_spec();
    const char* mode_name = regime == Regime::global     ? "global"
                            : regime == Regime::pretrain ? "pretrain"
                            : regime == Regime::finetune ? "finetune"
                                                         : "local";

    std::vector<BasinSeries> series;
    for (const auto& e : entries)
        series.push_back(manifest.load(e));

    std::vector<ReportRow> rows;
    if (regime == Regime::global) {
        const std::size_t n = series.size();
        if (n < 2)
            throw ConfigError("global mode needs at least two basins");
        std::vector<PreparedBasin> prepared;
        std::vector<std::string> ids;
        Metadata meta{{"run.mode", mode_name}};
        for (std::size_t i = 0; i < n; ++i) {
            prepared.push_back(
                prepare_basin(series[i], manifest.split, options_for(cfg, series[i], regime), std::nullopt,
                              std::make_pair(i, n)));
            ids.push_back(prepared.back().id);
            meta = merge(meta, prepared.back().stats.to_metadata("norm." + ids.back() + "."));
        }
        meta["run.basins"] = join(ids);
        const ModelConfig mc = cfg.model_config(series[0].driver_count() + n);
        say(log, "global " + to_string(mc.kind) + " over " + std::to_string(n) + " basins");
        auto members = fit_or_load(
            out / "global", k, tc, [&](const TrainConfig& c) { return train_global(mc, prepared, spec, c); }, meta,
            log);
        const auto alive = survivors(members);
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back(evaluate_rows(alive, prepared[i], spec, series[i], i, tc.threads));
    } else {
        for (const auto& s : series) {
            DataOptions opts = options_for(cfg, s, regime);
            std::optional<NormStats> stats;
            LoadedRun pretrained;
            if (regime == Regime::finetune) {
                const std::string src = cfg.str("pretrained");
                if (src.empty())
                    throw ConfigError("config key 'pretrained' is required for finetune");
                if (!fs::exists(fs::path(src) / s.basin_id))
                    throw ConfigError("config key 'pretrained': no run for basin '" + s.basin_id + "' in '" + src +
                                      "'");
                pretrained = load_members(fs::path(src) / s.basin_id);
                if (pretrained.models.size() < k)
                    throw ConfigError("pretrained run has " + std::to_string(pretrained.models.size()) +
                                      " members, ensemble needs " + std::to_string(k));
                stats = NormStats::from_metadata(pretrained.meta);
            }
            const PreparedBasin pb = prepare_basin(s, manifest.split, opts, stats);
            Metadata meta = merge({{"run.mode", mode_name}, {"run.basins", pb.id}}, pb.stats.to_metadata());
            if (regime == Regime::pretrain)
                meta["run.target"] = "sim_flow";
            std::function<TrainResult(const TrainConfig&)> train_one;
            ModelConfig mc;
            if (regime == Regime::finetune) {
                mc = pretrained.models[0]->config();
                train_one = [&](const TrainConfig& c) {
                    return finetune(*pretrained.models.at(c.seed - tc.seed), pb, spec, c);
                };
            } else {
                mc = cfg.model_config(s.driver_count());
                train_one = [&](const TrainConfig& c) { return train_local(mc, pb, spec, c); };
            }
            say(log, std::string(mode_name) + " " + to_string(mc.kind) + " on basin " + pb.id + " (" +
                         std::to_string(pb.train_starts.size()) + " training windows)");
            auto members = fit_or_load(out / pb.id, k, tc, train_one, meta, log);
            rows.push_back(evaluate_rows(survivors(members), pb, spec, s, 0, tc.threads));
        }
    }
    EvalReport report = summarize(rows);
    write_report((out / "report.csv").string(), report);
    plot_report(report, out / "nse_vs_runoff_ratio.svg");
    char line[128];
    std::snprintf(line, sizeof line, "test NSE (pooled) median %.4f, windowed median %.4f",
                  report.aggregates.at(1).nse_pooled, report.aggregates.at(1).nse_windowed);
    say(log, line);
    return report;
}

} // namespace

LogFn stderr_logger(const RunConfig& cfg)
{
    if (cfg.count("verbose") == 0)
        return {};
    return [](const std::string& line) { std::cerr << "[fhnn] " << line << std::endl; };
}

std::string cmd_simulate(const RunConfig& cfg, const LogFn& log)
{
    const fs::path out = prepare_out(cfg);
    const FleetConfig fc = cfg.fleet_config();
    const Fleet fleet = make_fleet(fc);
    const std::string manifest = write_fleet(out.string(), fleet);
    for (const auto& b : fleet.basins) {
        char line[96];
        std::snprintf(line, sizeof line, "basin %s runoff ratio %.3f", b.series.basin_id.c_str(), b.runoff_ratio);
        say(log, line);
    }
    say(log, "wrote " + manifest);
    return manifest;
}

EvalReport cmd_train(const RunConfig& cfg, const LogFn& log)
{
    const std::string mode = cfg.str("mode");
    if (mode == "local")
        return run_training(cfg, Regime::local, log);
    if (mode == "global")
        return run_training(cfg, Regime::global, log);
    if (mode == "pretrain")
        return run_training(cfg, Regime::pretrain, log);
    if (mode == "finetune")
        return run_training(cfg, Regime::finetune, log);
    throw ConfigError("config key 'mode': unknown mode '" + mode + "'");
}

EvalReport cmd_pretrain(const RunConfig& cfg, const LogFn& log)
{
    return run_training(cfg, Regime::pretrain, log);
}

EvalReport cmd_finetune(const RunConfig& cfg, const LogFn& log)
{
    return run_training(cfg, Regime::finetune, log);
}

EvalReport cmd_evaluate(const RunConfig& cfg, const LogFn& log)
{
    const fs::path run = cfg.str("checkpoint");
    if (run.empty() || !fs::is_directory(run))
        throw ConfigError("config key 'checkpoint' must name a run directory");
    const fs::path out = prepare_out(cfg);
    const Manifest manifest = load_dataset(cfg);
    DataOptions base = cfg.data_options();
    base.use_sim = false;
    std::vector<ReportRow> rows;
    const std::size_t threads = std::max<std::size_t>(1, cfg.count("threads"));
    if (fs::exists(run / "global")) {
        const LoadedRun members = load_members(run / "global");
        const auto ids = split_list(members.meta.at("run.basins"));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const BasinSeries s = manifest.load(manifest.find(ids[i]));
            const auto stats = NormStats::from_metadata(members.meta, "norm." + ids[i] + ".");
            const auto& mc = members.models[0]->config();
            DataOptions opts = base;
            opts.window = {mc.input_length, mc.horizon, 1};
            const PreparedBasin pb =
                prepare_basin(s, manifest.split, opts, stats, std::make_pair(i, ids.size()));
            rows.push_back(evaluate_rows(pointers(members.models), pb, opts.window, s, i, threads));
        }
    } else {
        for (const auto& e : selected_basins(cfg, manifest)) {
            if (!fs::exists(run / e.id))
                continue;
            const LoadedRun members = load_members(run / e.id);
            const BasinSeries s = manifest.load(e);
            const auto& mc = members.models[0]->config();
            DataOptions opts = base;
            opts.window = {mc.input_length, mc.horizon, 1};
            const PreparedBasin pb = prepare_basin(s, manifest.split, opts, NormStats::from_metadata(members.meta));
            rows.push_back(evaluate_rows(pointers(members.models), pb, opts.window, s, 0, threads));
        }
    }
    if (rows.empty())
        throw DataError("run '" + run.string() + "' has no checkpoints for the selected basins");
    EvalReport report = summarize(rows);
    write_report((out / "report.csv").string(), report);
    plot_report(report, out / "nse_vs_runoff_ratio.svg");
    say(log, "wrote " + (out / "report.csv").string());
    return report;
}

std::size_t cmd_states(const RunConfig& cfg, const LogFn& log)
{
    const fs::path run = cfg.str("checkpoint");
    if (run.empty() || !fs::is_directory(run))
        throw ConfigError("config key 'checkpoint' must name a run directory");
    const fs::path out = prepare_out(cfg);
    const Manifest manifest = load_dataset(cfg);
    auto ids = cfg.list("states_basin");
    if (ids.empty())
        for (const auto& e : manifest.basins)
            ids.push_back(e.id);

    const bool global = fs::exists(run / "global");
    LoadedRun shared;
    std::vector<std::string> global_ids;
    if (global) {
        shared = load_members(run / "global");
        global_ids = split_list(shared.meta.at("run.basins"));
    }

    std::vector<PlotPanel> panels;
    std::size_t written = 0;
    for (const auto& id : ids) {
        const BasinSeries s = manifest.load(manifest.find(id));
        LoadedRun local;
        const LoadedRun* members = &shared;
        std::optional<std::pair<std::size_t, std::size_t>> one_hot;
        NormStats stats;
        if (global) {
            const auto it = std::find(global_ids.begin(), global_ids.end(), id);
            if (it == global_ids.end())
                throw ConfigError("config key 'states_basin': '" + id + "' is not part of the global run");
            one_hot = std::make_pair(static_cast<std::size_t>(it - global_ids.begin()), global_ids.size());
            stats = NormStats::from_metadata(shared.meta, "norm." + id + ".");
        } else {
            local = load_members(run / id);
            members = &local;
            stats = NormStats::from_metadata(local.meta);
        }
        const auto* model = dynamic_cast<const FhnnModel*>(members->models[0].get());
        if (!model)
            throw ConfigError("states need an fhnn or fhnn_single checkpoint");
        const std::size_t T = model->config().input_length;
        const std::size_t K = model->config().horizon;

        const BasinSeries normed = apply_norm(s, stats);
        const Matrix drivers =
            one_hot ? append_one_hot(normed.drivers, one_hot->first, one_hot->second) : normed.drivers;
        const auto index_of = [&](const std::string& key, Timestamp fallback) {
            const Timestamp t = cfg.str(key).empty() ? fallback : parse_timestamp(cfg.str(key));
            const auto it = std::upper_bound(s.timestamps.begin(), s.timestamps.end(), t);
            if (it == s.timestamps.begin())
                throw ConfigError("config key '" + key + "' precedes the series");
            return static_cast<std::size_t>(it - s.timestamps.begin()) - 1;
        };
        const std::size_t last = index_of("states_to", manifest.split.val_end);
        const std::size_t first = index_of("states_from", s.timestamps[last]);
        if (first > last || first + 1 < T)
            throw ConfigError("states range must cover at least " + std::to_string(T) + " history steps");

        LatentState latest;
        for (std::size_t end = first; end <= last; end += K) {
            const std::size_t start = end + 1 - T;
            Matrix x(T, drivers.cols()), y(T, 1);
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t j = 0; j < drivers.cols(); ++j)
                    x(t, j) = drivers(start + t, j);
                y(t, 0) = normed.response[start + t];
            }
            latest = model->encode(x, y);
            std::string stamp = format_timestamp(s.timestamps[end]);
            stamp.erase(std::remove(stamp.begin(), stamp.end(), ':'), stamp.end());
            export_states(latest, (out / ("states_" + id + "_" + stamp + ".csv")).string());
            ++written;
        }
        auto trajectory = [&](const char* name, const Matrix& traj, const std::vector<std::size_t>& index) {
            PlotSeries series{name, {}, {}, false};
            for (std::size_t i = 0; i < traj.rows(); ++i) {
                double sum = 0.0;
                for (double v : traj.row(i))
                    sum += v;
                series.x.push_back(static_cast<double>(index[i]));
                series.y.push_back(traj.cols() ? sum / static_cast<double>(traj.cols()) : 0.0);
            }
            panels.push_back({id + " " + name, "history step", "mean hidden", {series}});
        };
        trajectory("fast", latest.fast, latest.fast_index);
        trajectory("medium", latest.medium, latest.medium_index);
        trajectory("slow", latest.slow, latest.slow_index);
    }
    write_svg((out / "states.svg").string(), panels, 3);
    say(log, "wrote " + std::to_string(written) + " state files to " + out.string());
    return written;
}

} // namespace fhnn

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

#include "training/trainer.hpp"

#include "metrics/nse.hpp"
#include "numerics/adam.hpp"
#include "numerics/errors.hpp"
#include "numerics/rng.hpp"
#include "training/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fhnn {

namespace {

constexpr std::uint64_t shuffle_stream = 0x5eed5407;

struct WindowRef
{
    std::size_t basin;
    std::size_t start;
};

std::vector<double> flat_values(const ParamSet& params)
{
    std::vector<double> out;
    out.reserve(params.scalar_count());
    for (const auto& p : params)
        out.insert(out.end(), p.value.values().begin(), p.value.values().end());
    return out;
}

void load_values(ParamSet& params, const std::vector<double>& flat)
{
    std::size_t k = 0;
    for (auto& p : params)
        for (double& v : p.value.values())
            v = flat[k++];
}

void add_grads(const ParamSet& params, std::vector<double>& total)
{
    std::size_t k = 0;
    for (const auto& p : params)
        for (double g : p.grad.values())
            total[k++] += g;
}

void store_grads(ParamSet& params, const std::vector<double>& flat)
{
    std::size_t k = 0;
    for (auto& p : params)
        for (double& g : p.grad.values())
            g = flat[k++];
}

// Median over basins of the NSE; basins without a defined NSE are left out.
// NaN when no basin can be scored.
double selection_score(const Forecaster& model, const std::vector<const PreparedBasin*>& data,
                       const WindowSpec& spec, const TrainConfig& cfg, std::size_t threads)
{
    const bool on_train = cfg.select_on_train;
    std::vector<double> scores;
    const std::vector<const Forecaster*> members{&model};
    for (std::size_t b = 0; b < data.size(); ++b) {
        const auto& starts = on_train ? data[b]->train_starts : data[b]->val_starts;
        if (starts.empty())
            continue;
        const auto pred = predict_basin(members, *data[b], spec, starts, b, threads);
        try {
            scores.push_back(cfg.select_windowed ? windowed_nse(pred.observed, pred.predicted).value
                                                 : pooled_nse(pred.observed, pred.predicted));
        } catch (const UndefinedNseError&) {
        }
    }
    return scores.empty() ? std::nan("") : median_of(scores);
}

} // namespace

void TrainConfig::validate() const
{
    if (!(lr > 0.0) || batch_size == 0 || patience == 0 || !(grad_clip > 0.0))
        throw ConfigError("training needs lr > 0, batch_size >= 1, patience >= 1 and grad_clip > 0");
}

void TrainHistory::write_csv(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << "epoch,train_loss,val_nse,wall_seconds,best\n";
    char buf[160];
    for (std::size_t e = 0; e < epochs(); ++e) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.3f,%d\n", e + 1, train_loss[e], val_nse[e], wall_time[e],
                      e + 1 == best_epoch ? 1 : 0);
        out << buf;
    }
    if (!out)
        throw IoError("cannot write '" + path + "'");
}

bool TrainHistory::same_trajectory(const TrainHistory& o) const
{
    auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i]))))
                return false;
        return true;
    };
    return best_epoch == o.best_epoch && same(train_loss, o.train_loss) && same(val_nse, o.val_nse);
}

BasinPredictions predict_basin(const std::vector<const Forecaster*>& members, const PreparedBasin& basin,
                               const WindowSpec& spec, const std::vector<std::size_t>& starts,
                               std::size_t basin_index, std::size_t threads)
{
    if (members.empty())
        throw ConfigError("prediction needs at least one model");
    BasinPredictions out;
    out.observed.resize(starts.size());
    out.predicted.resize(starts.size());
    parallel_for(starts.size(), threads, [&](std::size_t i, std::size_t) {
        const Window w = basin.window(spec, starts[i], basin_index);
        std::vector<double> mean(spec.horizon, 0.0);
        for (const auto* m : members) {
            const auto y = m->predict(w);
            for (std::size_t k = 0; k < spec.horizon; ++k)
                mean[k] += basin.stats.response.invert(y[k]);
        }
        for (double& v : mean)
            v /= static_cast<double>(members.size());
        out.predicted[i] = std::move(mean);
        out.observed[i] = basin.observed(spec, starts[i]);
    });
    return out;
}

TrainHistory train_model(Forecaster& model, const std::vector<PreparedBasin>& data_in, const WindowSpec& spec,
                         const TrainConfig& cfg)
{
    std::vector<const PreparedBasin*> data;
    for (const auto& b : data_in)
        data.push_back(&b);
    cfg.validate();
    if (spec.input_length != model.config().input_length || spec.horizon != model.config().horizon)
        throw ConfigError("window spec does not match the model's T and K");

    std::vector<WindowRef> pool;
    for (std::size_t b = 0; b < data.size(); ++b)
        for (std::size_t s : data[b]->train_starts)
            pool.push_back({b, s});
    if (pool.empty() && cfg.max_epochs > 0)
        throw DataError("no training windows");

    const auto clock_start = std::chrono::steady_clock::now();
    const std::size_t threads = std::max<std::size_t>(1, cfg.threads);
    auto log = [&](const std::string& line) {
        if (cfg.log)
            cfg.log(line);
    };

    TrainHistory history;
    std::vector<double> best = flat_values(model.params());
    history.best_score = cfg.max_epochs ? selection_score(model, data, spec, cfg, threads) : 0.0;
    if (std::isnan(history.best_score))
        history.best_score = -std::numeric_limits<double>::infinity();

    AdamState adam = AdamState::for_params(model.params(), cfg.lr);
    Rng shuffle_rng(derive_seed(cfg.seed, shuffle_stream));
    const std::size_t n_params = model.params().scalar_count();
    std::vector<std::unique_ptr<Forecaster>> workers;
    if (threads > 1)
        for (std::size_t w = 0; w < threads; ++w)
            workers.push_back(model.clone());

    std::size_t since_best = 0;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(pool.begin(), pool.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t first = 0; first < pool.size(); first += cfg.batch_size, ++batch_index) {
            const std::size_t n = std::min(cfg.batch_size, pool.size() - first);
            const double weight = 1.0 / static_cast<double>(n);
            std::vector<double> total(n_params, 0.0);
            std::vector<double> losses(n);
            if (threads == 1) {
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& ref = pool[first + i];
                    model.params().zero_grad();
                    losses[i] = model.accumulate_gradient(data[ref.basin]->window(spec, ref.start, ref.basin), weight);
                    add_grads(model.params(), total);
                }
            } else {
                const auto values = flat_values(model.params());
                for (auto& w : workers)
                    load_values(w->params(), values);
                std::vector<std::vector<double>> slots(n, std::vector<double>(n_params, 0.0));
                parallel_for(n, threads, [&](std::size_t i, std::size_t worker) {
                    auto& m = *workers[worker];
                    const auto& ref = pool[first + i];
                    m.params().zero_grad();
                    losses[i] = m.accumulate_gradient(data[ref.basin]->window(spec, ref.start, ref.basin), weight);
                    add_grads(m.params(), slots[i]);
                });
                for (const auto& slot : slots)
                    for (std::size_t k = 0; k < n_params; ++k)
                        total[k] += slot[k];
            }
            double batch_loss = 0.0;
            for (double l : losses)
                batch_loss += l;
            if (!std::isfinite(batch_loss) || !all_finite(total))
                throw DivergenceError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                      std::to_string(batch_index + 1));
            loss_sum += batch_loss;
            store_grads(model.params(), total);
            model.params().clip_grad_norm(cfg.grad_clip);
            adam_step(model.params(), adam);
        }
        const double train_loss = loss_sum / static_cast<double>(pool.size());
        const double score = selection_score(model, data, spec, cfg, threads);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
        history.train_loss.push_back(train_loss);
        history.val_nse.push_back(score);
        history.wall_time.push_back(elapsed);
        char line[128];
        std::snprintf(line, sizeof line, "epoch %zu loss %.5f score %.4f", epoch, train_loss, score);
        log(line);
        // No scorable basin (flat observations): select on the training loss.
        const double selected = std::isnan(score) ? -train_loss : score;
        if (selected > history.best_score) {
            history.best_score = selected;
            history.best_epoch = epoch;
            best = flat_values(model.params());
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
        if (history.best_score >= cfg.target_score)
            break;
    }
    load_values(model.params(), best);
    model.params().zero_grad();
    return history;
}

TrainResult train_local(const ModelConfig& model_cfg, const PreparedBasin& basin, const WindowSpec& spec,
                        const TrainConfig& cfg)
{
    ModelConfig mc = model_cfg;
    mc.teacher_forcing = cfg.teacher_forcing && mc.kind == ModelKind::lstm_ar;
    TrainResult r;
    r.model = make_forecaster(mc, cfg.seed);
    r.history = train_model(*r.model, {basin}, spec, cfg);
    return r;
}

TrainResult train_global(const ModelConfig& model_cfg, const std::vector<PreparedBasin>& basins,
                         const WindowSpec& spec, const TrainConfig& cfg)
{
    std::vector<PreparedBasin> kept;
    for (const auto& b : basins) {
        if (b.train_starts.empty()) {
            if (cfg.log)
                cfg.log("basin " + b.id + " has no training windows; excluded");
            continue;
        }
        kept.push_back(b);
    }
    if (kept.empty() || (basins.size() >= 2 && kept.size() < 2))
        throw DataError("global training needs at least two basins with training windows");
    ModelConfig mc = model_cfg;
    mc.teacher_forcing = cfg.teacher_forcing && mc.kind == ModelKind::lstm_ar;
    TrainResult r;
    r.model = make_forecaster(mc, cfg.seed);
    r.history = train_model(*r.model, kept, spec, cfg);
    return r;
}

TrainResult finetune(const Forecaster& pretrained, const PreparedBasin& basin, const WindowSpec& spec,
                     const TrainConfig& cfg)
{
    if (basin.drivers.cols() != pretrained.config().d_x)
        throw ConfigError("checkpoint expects " + std::to_string(pretrained.config().d_x) + " drivers, data has " +
                          std::to_string(basin.drivers.cols()));
    TrainResult r;
    r.model = pretrained.clone();
    r.history = train_model(*r.model, {basin}, spec, cfg);
    return r;
}

std::vector<EnsembleMember> train_ensemble(std::size_t k, const TrainConfig& cfg,
                                           const std::function<TrainResult(const TrainConfig&)>& train_one)
{
    if (k == 0)
        throw ConfigError("ensemble size must be at least 1");
    std::vector<EnsembleMember> members(k);
    const std::size_t outer = std::min(std::max<std::size_t>(cfg.threads, 1), k);
    parallel_for(k, outer, [&](std::size_t i, std::size_t) {
        TrainConfig c = cfg;
        c.seed = cfg.seed + i;
        if (outer > 1)
            c.threads = 1;
        try {
            auto r = train_one(c);
            members[i].model = std::move(r.model);
            members[i].history = std::move(r.history);
        } catch (const DivergenceError& e) {
            members[i].error = e.what();
        }
    });
    const std::size_t alive = survivors(members).size();
    if (alive < (k + 1) / 2)
        throw DivergenceError(std::to_string(k - alive) + " of " + std::to_string(k) + " ensemble members diverged");
    return members;
}

std::vector<const Forecaster*> survivors(const std::vector<EnsembleMember>& members)
{
    std::vector<const Forecaster*> out;
    for (const auto& m : members)
        if (m.model && m.error.empty())
            out.push_back(m.model.get());
    return out;
}

std::vector<double> predict_ensemble(const std::vector<const Forecaster*>& members, const Window& window)
{
    if (members.empty())
        throw ConfigError("prediction needs at least one model");
    std::vector<double> mean;
    for (const auto* m : members) {
        const auto y = m->predict(window);
        if (mean.empty())
            mean.assign(y.size(), 0.0);
        for (std::size_t k = 0; k < y.size(); ++k)
            mean[k] += y[k];
    }
    for (double& v : mean)
        v /= static_cast<double>(members.size());
    return mean;
}

} // namespace fhnn

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

#pragma once

#include "model/forecaster.hpp"
#include "training/dataset.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace fhnn {

struct TrainConfig
{
    double lr = 1e-3;
    std::size_t batch_size = 64;
    std::size_t max_epochs = 100;
    std::size_t patience = 20;
    std::uint64_t seed = 0;
    double grad_clip = 1.0;
    bool teacher_forcing = false;
    // Stop as soon as the selection score reaches this value.
    double target_score = std::numeric_limits<double>::infinity();
    // Score the training windows instead of validation (overfit runs).
    bool select_on_train = false;
    // Selection NSE per basin: pooled over all steps, or the mean of
    // per-window NSEs.
    bool select_windowed = false;
    std::size_t threads = 1;
    std::function<void(const std::string&)> log; // optional progress sink

    void validate() const;
};

struct TrainHistory
{
    std::vector<double> train_loss;
    std::vector<double> val_nse; // selection score: median over basins
    std::vector<double> wall_time;
    std::size_t best_epoch = 0;  // 1-based; 0 means the initial parameters
    double best_score = -std::numeric_limits<double>::infinity();

    std::size_t epochs() const noexcept { return train_loss.size(); }
    void write_csv(const std::string& path) const;
    // Equality ignoring wall time.
    bool same_trajectory(const TrainHistory& other) const;
};

struct EvalTarget
{
    const PreparedBasin* basin = nullptr;
    std::size_t index = 0;                  // basin index inside the model's data
    const std::vector<std::size_t>* starts = nullptr;
};

struct BasinPredictions
{
    std::vector<std::vector<double>> observed;  // physical units
    std::vector<std::vector<double>> predicted; // physical units
};

// De-normalized predictions of the mean of `members` (a single member is
// allowed) over the windows starting at `starts`.
BasinPredictions predict_basin(const std::vector<const Forecaster*>& members, const PreparedBasin& basin,
                               const WindowSpec& spec, const std::vector<std::size_t>& starts,
                               std::size_t basin_index = 0, std::size_t threads = 1);

// Mini-batch Adam over the pooled training windows of `data`, early stopping
// on the median per-basin validation NSE. The model is left at its best
// parameters. Throws DivergenceError naming the epoch and batch on a
// non-finite loss.
TrainHistory train_model(Forecaster& model, const std::vector<PreparedBasin>& data, const WindowSpec& spec,
                         const TrainConfig& cfg);

// Fresh model trained on one basin.
struct TrainResult
{
    std::unique_ptr<Forecaster> model;
    TrainHistory history;
};

TrainResult train_local(const ModelConfig& model_cfg, const PreparedBasin& basin, const WindowSpec& spec,
                        const TrainConfig& cfg);
// One model over all basins (each prepared with its one-hot). Basins with no
// training windows are dropped with a log line. Dropping below two basins
// (or having none) is a DataError.
TrainResult train_global(const ModelConfig& model_cfg, const std::vector<PreparedBasin>& basins,
                         const WindowSpec& spec, const TrainConfig& cfg);
// Continues from `pretrained` with a fresh optimizer state.
TrainResult finetune(const Forecaster& pretrained, const PreparedBasin& basin, const WindowSpec& spec,
                     const TrainConfig& cfg);

struct EnsembleMember
{
    std::unique_ptr<Forecaster> model;
    TrainHistory history;
    std::string error; // non-empty when the member diverged
};

// Runs `k` members with seeds cfg.seed + i. Members run in parallel when
// cfg.threads > 1; each member then trains single-threaded. Throws
// DivergenceError when fewer than ceil(k/2) members survive.
std::vector<EnsembleMember> train_ensemble(std::size_t k, const TrainConfig& cfg,
                                           const std::function<TrainResult(const TrainConfig&)>& train_one);

std::vector<const Forecaster*> survivors(const std::vector<EnsembleMember>& members);

// Mean of member predictions for one window (normalized units).
std::vector<double> predict_ensemble(const std::vector<const Forecaster*>& members, const Window& window);

} // namespace fhnn

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

#include "app/commands.hpp"

#include <string>
#include <vector>

namespace fhnn {

/// Test-period scores of one ensemble on one basin (physical units).
struct EnsembleScore
{
    double nse_pooled = 0.0;
    double nse_windowed = 0.0;
    double ensemble_mse = 0.0;    // MSE of the member-mean prediction
    double mean_member_mse = 0.0; // average of the members' own MSEs
};

struct TrendsResult
{
    struct MemoryRow
    {
        std::string basin;
        double runoff_ratio = 0.0;
        EnsembleScore fhnn;
        EnsembleScore lstm_ar;
        double gain() const noexcept { return fhnn.nse_pooled - lstm_ar.nse_pooled; }
    };
    struct PretrainRow
    {
        std::string basin;
        double runoff_ratio = 0.0;
        EnsembleScore scratch_limited;
        EnsembleScore pretrained_finetuned;
        EnsembleScore scratch_all;
        EnsembleScore pretrained_vs_sim; // before fine-tuning, scored on sim_flow
        EnsembleScore pretrained_vs_obs; // before fine-tuning, scored on flow
    };
    struct GlobalRow
    {
        std::string basin;
        double runoff_ratio = 0.0;
        EnsembleScore fhnn_local;
        EnsembleScore fhnn_global;
        EnsembleScore lstm_ar_local;
        EnsembleScore lstm_ar_global;
    };
    struct EnsembleCheck
    {
        std::string label;
        double ensemble_mse = 0.0;
        double mean_member_mse = 0.0;
    };

    std::vector<MemoryRow> memory;
    std::vector<PretrainRow> pretrain;
    std::vector<GlobalRow> global;
    std::vector<EnsembleCheck> ensembles;

    // Orderings the recipe is meant to exhibit (pooled test NSE).
    double memory_rank_correlation = 0.0; // gain vs runoff ratio
    double gain_low_runoff = 0.0;         // mean gain, lower half of runoff ratios
    double gain_high_runoff = 0.0;
};

// Simulates the configured fleet, then trains and scores: local FHNN vs
// LSTM-AR on all training years; scratch vs pretrained+finetuned FHNN on
// trends_limited_years; local vs global FHNN and LSTM-AR on
// trends_global_years. Writes trends_*.csv tables, a summary and plots.
TrendsResult cmd_trends(const RunConfig& cfg, const LogFn& log = {});

} // namespace fhnn

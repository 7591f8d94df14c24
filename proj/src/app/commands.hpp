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

#include "app/run_config.hpp"
#include "metrics/report.hpp"

#include <functional>
#include <string>

namespace fhnn {

using LogFn = std::function<void(const std::string&)>;

// Progress lines to stderr when the config's verbose flag is set.
LogFn stderr_logger(const RunConfig& cfg);

// Every command writes under cfg "out" and leaves a config.txt snapshot.
// Errors surface as ConfigError, DataError, DivergenceError or IoError.

// Synthetic fleet CSVs plus manifest.txt. Returns the manifest path.
std::string cmd_simulate(const RunConfig& cfg, const LogFn& log = {});
// mode local or global; per-member checkpoints, history CSVs and a test
// report. Existing member checkpoints are reused (resume).
EvalReport cmd_train(const RunConfig& cfg, const LogFn& log = {});
// Trains on sim_flow; validation scores against sim_flow too.
EvalReport cmd_pretrain(const RunConfig& cfg, const LogFn& log = {});
// Continues each member of the `pretrained` run on observed flow, limited
// to the last train_years of the training period when set.
EvalReport cmd_finetune(const RunConfig& cfg, const LogFn& log = {});
// Test-period report of the run directory named by `checkpoint`.
EvalReport cmd_evaluate(const RunConfig& cfg, const LogFn& log = {});
// Per-scale state trajectories for the history windows ending within
// [states_from, states_to] (step K apart) of each requested basin.
// Returns the number of state files written.
std::size_t cmd_states(const RunConfig& cfg, const LogFn& log = {});

} // namespace fhnn

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

#include "data/normalize.hpp"
#include "data/windows.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhnn {

/// Which rows feed training and evaluation.
struct DataOptions
{
    WindowSpec window;             // T, K and the training stride
    std::size_t eval_stride = 1;   // stride of validation and test windows
    std::size_t train_steps = 0;   // keep only the last N training rows (0 = all)
    bool use_sim = false;          // substitute sim_response for the response
};

/// A basin ready for the optimizer: normalized drivers (with the basin
/// one-hot in global mode), normalized target and window start lists.
struct PreparedBasin
{
    std::string id;
    Matrix drivers;
    std::vector<double> target;
    NormStats stats;
    Timestamp origin = 0;
    std::int64_t step = 0;
    std::vector<std::size_t> train_starts;
    std::vector<std::size_t> val_starts;
    std::vector<std::size_t> test_starts;
    SplitRanges ranges;
    IndexRange train_range; // after train_steps limiting

    Window window(const WindowSpec& spec, std::size_t start, std::size_t basin_index = 0) const;
    // Physical-unit target over the K forecast rows of the window at `start`.
    std::vector<double> observed(const WindowSpec& spec, std::size_t start) const;
};

// Fits normalization on the (possibly limited) training rows unless `stats`
// is supplied. With a limited training range, training windows draw their
// history from inside that range only. `one_hot` = (index, n_basins)
// appends the basin code after normalization.
PreparedBasin prepare_basin(const BasinSeries& series, const SplitSpec& split, const DataOptions& opts,
                            const std::optional<NormStats>& stats = std::nullopt,
                            std::optional<std::pair<std::size_t, std::size_t>> one_hot = std::nullopt);

} // namespace fhnn

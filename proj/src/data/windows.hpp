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

#include "data/basin_series.hpp"
#include "model/window.hpp"

#include <cstddef>
#include <vector>

namespace fhnn {

/// Inclusive end timestamps of the train, validation and test periods.
struct SplitSpec
{
    Timestamp train_end = 0;
    Timestamp val_end = 0;
    Timestamp test_end = 0;

    void validate() const;
};

/// Half-open row range [begin, end).
struct IndexRange
{
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
    bool empty() const noexcept { return end <= begin; }
};

struct SplitRanges
{
    IndexRange train;
    IndexRange val;
    IndexRange test;
};

// Train starts at the first row; each later period starts after the
// previous end. Throws DataError when a split date falls outside the series.
SplitRanges split_ranges(const BasinSeries& series, const SplitSpec& split);

// The last `steps` rows of `range` (all of it when steps is zero or larger).
IndexRange tail(const IndexRange& range, std::size_t steps);

/// Where a window's targets may fall and how far back its history may reach.
struct WindowSpec
{
    std::size_t input_length = 0; // T
    std::size_t horizon = 0;      // K
    std::size_t stride = 1;
};

// First history row of every window whose K forecast rows lie inside
// `targets` and whose T history rows start at or after `history_floor`.
// Starts advance by `stride` from the earliest admissible one.
std::vector<std::size_t> window_starts(const WindowSpec& spec, const IndexRange& targets,
                                       std::size_t history_floor = 0);

// Builds one window from row-aligned drivers and response.
Window make_window(const Matrix& drivers, const std::vector<double>& response, const WindowSpec& spec,
                   std::size_t start, std::size_t basin = 0, Timestamp t_start = 0);

// All stride-spaced windows over the whole series. Throws DataError when the
// series is shorter than T + K.
std::vector<Window> make_windows(const BasinSeries& series, const WindowSpec& spec);

std::vector<double> one_hot_basin(std::size_t index, std::size_t n_basins);
// Appends the basin one-hot to every row.
Matrix append_one_hot(const Matrix& drivers, std::size_t index, std::size_t n_basins);

} // namespace fhnn

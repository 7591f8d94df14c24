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

#include "training/dataset.hpp"

#include "numerics/errors.hpp"

namespace fhnn {

Window PreparedBasin::window(const WindowSpec& spec, std::size_t start, std::size_t basin_index) const
{
    return make_window(drivers, target, spec, start, basin_index, origin + static_cast<std::int64_t>(start) * step);
}

std::vector<double> PreparedBasin::observed(const WindowSpec& spec, std::size_t start) const
{
    std::vector<double> y(spec.horizon);
    for (std::size_t k = 0; k < spec.horizon; ++k)
        y[k] = stats.response.invert(target.at(start + spec.input_length + k));
    return y;
}

PreparedBasin prepare_basin(const BasinSeries& series, const SplitSpec& split, const DataOptions& opts,
                            const std::optional<NormStats>& stats,
                            std::optional<std::pair<std::size_t, std::size_t>> one_hot)
{
    if (opts.use_sim && !series.sim_response)
        throw DataError("basin '" + series.basin_id + "' has no sim_flow column");
    PreparedBasin b;
    b.id = series.basin_id;
    b.ranges = split_ranges(series, split);
    b.train_range = tail(b.ranges.train, opts.train_steps);
    b.stats = stats ? *stats : fit_norm(series, b.train_range, opts.use_sim);
    const BasinSeries normed = apply_norm(series, b.stats);
    b.drivers = one_hot ? append_one_hot(normed.drivers, one_hot->first, one_hot->second) : normed.drivers;
    b.target = opts.use_sim ? *normed.sim_response : normed.response;
    b.origin = series.timestamps.front();
    b.step = series.step_seconds();

    const std::size_t floor = opts.train_steps ? b.train_range.begin : 0;
    b.train_starts = window_starts(opts.window, b.train_range, floor);
    WindowSpec eval = opts.window;
    eval.stride = opts.eval_stride;
    b.val_starts = window_starts(eval, b.ranges.val);
    b.test_starts = window_starts(eval, b.ranges.test);
    return b;
}

} // namespace fhnn

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

#include "data/windows.hpp"

#include "numerics/errors.hpp"

#include <algorithm>

namespace fhnn {

void SplitSpec::validate() const
{
    if (!(train_end < val_end && val_end < test_end))
        throw ConfigError("split dates must satisfy train_end < val_end < test_end");
}

SplitRanges split_ranges(const BasinSeries& series, const SplitSpec& split)
{
    split.validate();
    const auto& ts = series.timestamps;
    if (ts.empty())
        throw DataError("basin '" + series.basin_id + "' is empty");
    auto end_of = [&](Timestamp t, const char* name) {
        if (t < ts.front() || t > ts.back())
            throw DataError("basin '" + series.basin_id + "': " + name + " " + format_timestamp(t) +
                            " lies outside the series");
        return static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    };
    SplitRanges r;
    r.train = {0, end_of(split.train_end, "train_end")};
    r.val = {r.train.end, end_of(split.val_end, "val_end")};
    r.test = {r.val.end, end_of(split.test_end, "test_end")};
    return r;
}

IndexRange tail(const IndexRange& range, std::size_t steps)
{
    if (steps == 0 || steps >= range.size())
        return range;
    return {range.end - steps, range.end};
}

std::vector<std::size_t> window_starts(const WindowSpec& spec, const IndexRange& targets,
                                       std::size_t history_floor)
{
    if (spec.input_length == 0 || spec.horizon == 0 || spec.stride == 0)
        throw ConfigError("window input length, horizon and stride must be positive");
    const std::size_t T = spec.input_length;
    const std::size_t K = spec.horizon;
    std::vector<std::size_t> starts;
    if (targets.end < T + K)
        return starts;
    const std::size_t first = std::max(targets.begin >= T ? targets.begin - T : 0, history_floor);
    const std::size_t last = targets.end - T - K;
    for (std::size_t s = first; s <= last; s += spec.stride)
        starts.push_back(s);
    return starts;
}

Window make_window(const Matrix& drivers, const std::vector<double>& response, const WindowSpec& spec,
                   std::size_t start, std::size_t basin, Timestamp t_start)
{
    const std::size_t T = spec.input_length;
    const std::size_t K = spec.horizon;
    const std::size_t d = drivers.cols();
    if (start + T + K > drivers.rows() || drivers.rows() != response.size())
        throw DataError("window at row " + std::to_string(start) + " runs past the series");
    Window w;
    w.x_hist = Matrix(T, d);
    w.y_hist = Matrix(T, 1);
    w.x_fcst = Matrix(K, d);
    w.y_fcst = Matrix(K, 1);
    const double* src = drivers.data() + start * d;
    std::copy(src, src + T * d, w.x_hist.data());
    std::copy(src + T * d, src + (T + K) * d, w.x_fcst.data());
    std::copy(response.begin() + static_cast<std::ptrdiff_t>(start),
              response.begin() + static_cast<std::ptrdiff_t>(start + T), w.y_hist.data());
    std::copy(response.begin() + static_cast<std::ptrdiff_t>(start + T),
              response.begin() + static_cast<std::ptrdiff_t>(start + T + K), w.y_fcst.data());
    w.basin = basin;
    w.t_start = t_start;
    return w;
}

std::vector<Window> make_windows(const BasinSeries& series, const WindowSpec& spec)
{
    if (series.length() < spec.input_length + spec.horizon)
        throw DataError("basin '" + series.basin_id + "' has " + std::to_string(series.length()) +
                        " rows, fewer than T + K = " + std::to_string(spec.input_length + spec.horizon));
    std::vector<Window> out;
    for (std::size_t s : window_starts(spec, {0, series.length()}))
        out.push_back(make_window(series.drivers, series.response, spec, s, 0, series.timestamps[s]));
    return out;
}

std::vector<double> one_hot_basin(std::size_t index, std::size_t n_basins)
{
    if (index >= n_basins)
        throw ConfigError("basin index " + std::to_string(index) + " out of range for " +
                          std::to_string(n_basins) + " basins");
    std::vector<double> v(n_basins, 0.0);
    v[index] = 1.0;
    return v;
}

Matrix append_one_hot(const Matrix& drivers, std::size_t index, std::size_t n_basins)
{
    const auto code = one_hot_basin(index, n_basins);
    const std::size_t d = drivers.cols();
    Matrix out(drivers.rows(), d + n_basins);
    for (std::size_t r = 0; r < drivers.rows(); ++r) {
        std::copy(drivers.row(r).begin(), drivers.row(r).end(), out.row(r).begin());
        std::copy(code.begin(), code.end(), out.row(r).begin() + static_cast<std::ptrdiff_t>(d));
    }
    return out;
}

} // namespace fhnn

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

#include "metrics/nse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fhnn {

double nse(std::span<const double> obs, std::span<const double> sim)
{
    if (obs.size() != sim.size())
        throw ShapeError("nse: " + std::to_string(obs.size()) + " observations vs " + std::to_string(sim.size()) +
                         " predictions");
    if (obs.size() < 2)
        throw UndefinedNseError("nse needs at least two observations");
    if (!all_finite(obs) || !all_finite(sim))
        throw NumericError("nse: non-finite input");
    const double mean = mean_of(obs);
    double err = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        err += (sim[i] - obs[i]) * (sim[i] - obs[i]);
        var += (obs[i] - mean) * (obs[i] - mean);
    }
    if (var == 0.0)
        throw UndefinedNseError("nse undefined for constant observations");
    return 1.0 - err / var;
}

WindowedNse windowed_nse(const std::vector<std::vector<double>>& obs, const std::vector<std::vector<double>>& sim)
{
    if (obs.size() != sim.size())
        throw ShapeError("windowed_nse: window counts differ");
    WindowedNse out;
    double sum = 0.0;
    for (std::size_t w = 0; w < obs.size(); ++w) {
        try {
            sum += nse(obs[w], sim[w]);
            ++out.n_windows;
        } catch (const UndefinedNseError&) {
            ++out.n_skipped;
        }
    }
    if (out.n_windows == 0)
        throw UndefinedNseError("no window with varying observations");
    out.value = sum / static_cast<double>(out.n_windows);
    return out;
}

double pooled_nse(const std::vector<std::vector<double>>& obs, const std::vector<std::vector<double>>& sim)
{
    if (obs.size() != sim.size())
        throw ShapeError("pooled_nse: window counts differ");
    std::vector<double> o, s;
    for (std::size_t w = 0; w < obs.size(); ++w) {
        if (obs[w].size() != sim[w].size())
            throw ShapeError("pooled_nse: window lengths differ");
        o.insert(o.end(), obs[w].begin(), obs[w].end());
        s.insert(s.end(), sim[w].begin(), sim[w].end());
    }
    return nse(o, s);
}

double runoff_ratio(const BasinSeries& series, const IndexRange& range)
{
    if (range.empty() || range.end > series.length() || series.driver_count() == 0)
        throw DataError("runoff_ratio: empty or out-of-range period");
    std::size_t col = 0;
    const auto it = std::find(series.driver_names.begin(), series.driver_names.end(), "precip");
    if (it != series.driver_names.end())
        col = static_cast<std::size_t>(it - series.driver_names.begin());
    double q = 0.0, p = 0.0;
    for (std::size_t t = range.begin; t < range.end; ++t) {
        q += series.response[t];
        p += series.drivers(t, col);
    }
    if (!(p > 0.0))
        throw DataError("runoff_ratio: no precipitation in period");
    return q / p;
}

double mean_of(std::span<const double> values)
{
    if (values.empty())
        throw DataError("mean of an empty set");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median_of(std::vector<double> values)
{
    if (values.empty())
        throw DataError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

std::vector<double> ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j);
        for (std::size_t k = i; k <= j; ++k)
            r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace

double rank_correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.size() < 2)
        throw ShapeError("rank_correlation needs two equal-length samples of size >= 2");
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double ma = mean_of(ra), mb = mean_of(rb);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0)
        return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace fhnn

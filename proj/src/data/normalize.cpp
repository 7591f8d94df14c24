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

#include "data/normalize.hpp"

#include "numerics/errors.hpp"

#include <charconv>
#include <cmath>

namespace fhnn {

namespace {

std::string number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

double lookup(const Metadata& meta, const std::string& key)
{
    const auto it = meta.find(key);
    if (it == meta.end())
        throw ConfigError("normalization record missing '" + key + "'");
    double v = 0.0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("normalization record '" + key + "' is not a number");
    return v;
}

void put(Metadata& meta, const std::string& key, const NormStats::Feature& f)
{
    meta[key + ".mean"] = number(f.mean);
    meta[key + ".std"] = number(f.std);
    meta[key + ".constant"] = f.constant ? "1" : "0";
}

NormStats::Feature get(const Metadata& meta, const std::string& key)
{
    NormStats::Feature f;
    f.mean = lookup(meta, key + ".mean");
    f.std = lookup(meta, key + ".std");
    f.constant = lookup(meta, key + ".constant") != 0.0;
    return f;
}

} // namespace

NormStats::Feature fit_feature(std::span<const double> values)
{
    if (values.empty())
        throw DataError("cannot fit normalization on an empty range");
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values)
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    NormStats::Feature f;
    f.mean = mean;
    f.std = std::sqrt(var);
    if (!(f.std > 1e-12 * std::max(1.0, std::abs(mean)))) {
        f.constant = true;
        f.mean = 0.0;
        f.std = 1.0;
    }
    return f;
}

NormStats fit_norm(const BasinSeries& series, const IndexRange& range, bool use_sim)
{
    if (range.empty() || range.end > series.length())
        throw DataError("basin '" + series.basin_id + "': empty or out-of-range normalization range");
    if (use_sim && !series.sim_response)
        throw DataError("basin '" + series.basin_id + "' has no sim_flow column");
    NormStats stats;
    std::vector<double> column(range.size());
    for (std::size_t j = 0; j < series.driver_count(); ++j) {
        for (std::size_t i = range.begin; i < range.end; ++i)
            column[i - range.begin] = series.drivers(i, j);
        stats.drivers.push_back(fit_feature(column));
    }
    const auto& y = use_sim ? *series.sim_response : series.response;
    stats.response = fit_feature(std::span<const double>(y).subspan(range.begin, range.size()));
    return stats;
}

BasinSeries apply_norm(const BasinSeries& series, const NormStats& stats)
{
    if (stats.drivers.size() != series.driver_count())
        throw DataError("basin '" + series.basin_id + "': normalization expects " +
                        std::to_string(stats.drivers.size()) + " drivers, series has " +
                        std::to_string(series.driver_count()));
    BasinSeries out = series;
    for (std::size_t i = 0; i < out.length(); ++i)
        for (std::size_t j = 0; j < out.driver_count(); ++j)
            out.drivers(i, j) = stats.drivers[j].apply(series.drivers(i, j));
    for (double& v : out.response)
        v = stats.response.apply(v);
    if (out.sim_response)
        for (double& v : *out.sim_response)
            v = stats.response.apply(v);
    return out;
}

std::vector<double> invert_response(std::span<const double> values, const NormStats& stats)
{
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = stats.response.invert(values[i]);
    return out;
}

Metadata NormStats::to_metadata(const std::string& prefix) const
{
    Metadata meta;
    meta[prefix + "drivers"] = std::to_string(drivers.size());
    for (std::size_t j = 0; j < drivers.size(); ++j)
        put(meta, prefix + "x" + std::to_string(j), drivers[j]);
    put(meta, prefix + "y", response);
    return meta;
}

NormStats NormStats::from_metadata(const Metadata& meta, const std::string& prefix)
{
    NormStats stats;
    const auto n = static_cast<std::size_t>(lookup(meta, prefix + "drivers"));
    for (std::size_t j = 0; j < n; ++j)
        stats.drivers.push_back(get(meta, prefix + "x" + std::to_string(j)));
    stats.response = get(meta, prefix + "y");
    return stats;
}

} // namespace fhnn

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

#include "synth/fleet.hpp"

#include "numerics/errors.hpp"
#include "numerics/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

namespace fhnn {

namespace {

double lerp(double a, double b, double t) { return a + (b - a) * t; }

std::string number(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void add_params(Manifest::Entry& e, const std::string& prefix, const CatchmentParams& p)
{
    e.attributes[prefix + ".ddf"] = number(p.ddf);
    e.attributes[prefix + ".t_snow"] = number(p.t_snow);
    e.attributes[prefix + ".soil_cap"] = number(p.soil_cap);
    e.attributes[prefix + ".et_coeff"] = number(p.et_coeff);
    e.attributes[prefix + ".frac_fast"] = number(p.frac_fast);
    e.attributes[prefix + ".k_fast"] = number(p.k_fast);
    e.attributes[prefix + ".k_slow"] = number(p.k_slow);
}

} // namespace

RegimeProfile regime_profile(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    RegimeProfile r;
    r.weather.steps_per_year = 365;
    r.weather.temp_mean = lerp(12.0, 2.0, t);
    r.weather.temp_amplitude = lerp(8.0, 15.0, t);
    r.weather.temp_noise = 2.5;
    r.weather.precip_prob = lerp(0.45, 0.3, t);
    r.weather.precip_shape = 0.8;
    r.weather.precip_scale = lerp(10.0, 6.0, t);
    r.catchment.ddf = lerp(3.0, 2.0, t);
    r.catchment.t_snow = 0.0;
    r.catchment.soil_cap = lerp(60.0, 170.0, t);
    r.catchment.et_coeff = lerp(0.003, 0.0045, t);
    r.catchment.frac_fast = lerp(0.8, 0.3, t);
    r.catchment.k_fast = lerp(0.5, 0.25, t);
    r.catchment.k_slow = lerp(0.05, 0.01, t);
    return r;
}

double regime_position(const std::string& regime)
{
    std::string name = regime;
    std::replace(name.begin(), name.end(), '_', '-');
    if (name == "wet-flashy")
        return 0.0;
    if (name == "wet-mixed")
        return 0.25;
    if (name == "moderate")
        return 0.5;
    if (name == "dry-mixed")
        return 0.75;
    if (name == "dry-snowy")
        return 1.0;
    throw ConfigError("unknown regime '" + regime + "'");
}

RegimeProfile rescale_profile(const RegimeProfile& daily, std::size_t steps_per_year)
{
    const double f = 365.0 / static_cast<double>(steps_per_year);
    RegimeProfile r = daily;
    r.weather.steps_per_year = steps_per_year;
    r.weather.precip_scale *= f;
    r.catchment.ddf *= f;
    r.catchment.et_coeff *= f;
    r.catchment.k_fast = 1.0 - std::pow(1.0 - daily.catchment.k_fast, f);
    r.catchment.k_slow = 1.0 - std::pow(1.0 - daily.catchment.k_slow, f);
    return r;
}

CatchmentParams perturb_params(const CatchmentParams& params, double relative, std::uint64_t seed)
{
    if (relative == 0.0)
        return params;
    if (!(relative > 0.0 && relative < 1.0))
        throw ConfigError("perturbation must lie in [0, 1)");
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    auto scale = [&](double v) { return v * (1.0 + (coin(rng) ? relative : -relative)); };
    CatchmentParams p = params;
    p.ddf = scale(p.ddf);
    p.t_snow = p.t_snow + (coin(rng) ? 4.0 : -4.0) * relative;
    p.soil_cap = scale(p.soil_cap);
    p.et_coeff = scale(p.et_coeff);
    p.frac_fast = std::min(scale(p.frac_fast), 1.0);
    p.k_fast = std::min(scale(p.k_fast), 1.0);
    p.k_slow = std::min(scale(p.k_slow), 0.5 * p.k_fast);
    return p;
}

void FleetConfig::validate() const
{
    if (n_basins == 0)
        throw ConfigError("fleet needs at least one basin");
    if (steps_per_year == 0 || (86400ll * 365) % static_cast<long long>(steps_per_year) != 0)
        throw ConfigError("steps_per_year must divide a 365-day year into whole seconds");
    if (train_years == 0 || val_years == 0 || train_years + val_years >= years)
        throw ConfigError("fleet years must exceed train_years + val_years (both positive)");
    if (!(perturbation >= 0.0 && perturbation < 1.0) || !(jitter >= 0.0 && jitter < 1.0))
        throw ConfigError("fleet perturbation and jitter must lie in [0, 1)");
    if (regime != "gradient")
        (void)regime_position(regime);
}

std::int64_t step_seconds_for(std::size_t steps_per_year)
{
    return 86400ll * 365 / static_cast<std::int64_t>(steps_per_year);
}

Fleet make_fleet(const FleetConfig& cfg)
{
    cfg.validate();
    const std::size_t spy = cfg.steps_per_year;
    const std::size_t kept = cfg.years * spy;
    const std::size_t total = kept + cfg.spinup_years * spy;
    const std::int64_t step = step_seconds_for(spy);
    const Timestamp origin = make_timestamp(cfg.start_year, 1, 1);

    Fleet fleet;
    for (std::size_t b = 0; b < cfg.n_basins; ++b) {
        const double position = cfg.regime == "gradient"
                                    ? (cfg.n_basins == 1 ? 0.0 : double(b) / double(cfg.n_basins - 1))
                                    : regime_position(cfg.regime);
        RegimeProfile profile = rescale_profile(regime_profile(position), spy);

        Rng jitter_rng(derive_seed(cfg.seed, 3 * b));
        std::uniform_real_distribution<double> u(-cfg.jitter, cfg.jitter);
        CatchmentParams& c = profile.catchment;
        c.soil_cap *= 1.0 + u(jitter_rng);
        c.et_coeff *= 1.0 + u(jitter_rng);
        c.frac_fast = std::min(c.frac_fast * (1.0 + u(jitter_rng)), 1.0);
        c.k_fast = std::min(c.k_fast * (1.0 + u(jitter_rng)), 1.0);
        c.k_slow *= 1.0 + u(jitter_rng);
        profile.weather.precip_scale *= 1.0 + u(jitter_rng);
        profile.weather.seed = derive_seed(cfg.seed, 3 * b + 1);

        FleetBasin fb;
        fb.truth = c;
        fb.perturbed = perturb_params(c, cfg.perturbation, derive_seed(cfg.seed, 3 * b + 2));
        fb.regime_position = position;

        const Matrix weather = generate_weather(total, profile.weather);
        const auto truth = simulate(weather, fb.truth);
        const auto sim = simulate(weather, fb.perturbed);

        BasinSeries& s = fb.series;
        char id[16];
        std::snprintf(id, sizeof id, "b%02zu", b);
        s.basin_id = id;
        s.driver_names = {"precip", "temp"};
        const std::size_t skip = total - kept;
        s.drivers = Matrix(kept, 2);
        s.response.resize(kept);
        s.sim_response = std::vector<double>(kept);
        s.timestamps.resize(kept);
        for (std::size_t t = 0; t < kept; ++t) {
            s.timestamps[t] = origin + static_cast<std::int64_t>(t) * step;
            s.drivers(t, 0) = weather(skip + t, 0);
            s.drivers(t, 1) = weather(skip + t, 1);
            s.response[t] = truth.flow[skip + t];
            (*s.sim_response)[t] = sim.flow[skip + t];
        }
        double q = 0.0, p = 0.0;
        for (std::size_t t = 0; t < kept; ++t) {
            q += s.response[t];
            p += s.drivers(t, 0);
        }
        fb.runoff_ratio = q / p;
        fleet.basins.push_back(std::move(fb));
    }
    const auto end_of_year = [&](std::size_t y) {
        return origin + static_cast<std::int64_t>(y * spy - 1) * step;
    };
    fleet.split.train_end = end_of_year(cfg.train_years);
    fleet.split.val_end = end_of_year(cfg.train_years + cfg.val_years);
    fleet.split.test_end = end_of_year(cfg.years);
    return fleet;
}

std::string write_fleet(const std::string& dir, const Fleet& fleet)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir + "': " + ec.message());
    Manifest m;
    m.split = fleet.split;
    for (const auto& b : fleet.basins) {
        const std::string file = b.series.basin_id + ".csv";
        write_basin_csv((fs::path(dir) / file).string(), b.series);
        Manifest::Entry e{b.series.basin_id, file, {}};
        e.attributes["runoff_ratio"] = number(b.runoff_ratio);
        e.attributes["regime_position"] = number(b.regime_position);
        add_params(e, "truth", b.truth);
        add_params(e, "sim", b.perturbed);
        m.basins.push_back(std::move(e));
    }
    const std::string path = (fs::path(dir) / "manifest.txt").string();
    write_manifest(path, m);
    return path;
}

} // namespace fhnn

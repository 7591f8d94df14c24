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

#include "app/run_config.hpp"

#include "numerics/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fhnn {

namespace {

const std::map<std::string, std::string>& defaults()
{
    static const std::map<std::string, std::string> d = {
        {"preset", ""},
        {"model", "fhnn"},
        {"mode", "local"},
        {"manifest", ""},
        {"basins", ""},
        {"out", "runs/default"},
        {"seed", "7"},
        {"threads", "1"},
        {"ensemble", "5"},
        {"verbose", "1"},
        // architecture
        {"h_enc", "11"},
        {"m", "4"},
        {"s", "28"},
        {"d_z", "32"},
        {"mlp_hidden", "32"},
        {"T_in", "720"},
        {"K", "28"},
        {"z_to_cell", "0"},
        // optimization
        {"lr", "0.001"},
        {"batch_size", "64"},
        {"max_epochs", "100"},
        {"patience", "20"},
        {"grad_clip", "1.0"},
        {"teacher_forcing", "0"},
        {"select_metric", "pooled"},
        // data
        {"train_stride", "1"},
        {"eval_stride", "1"},
        {"train_years", "0"},
        {"train_end", ""},
        {"val_end", ""},
        {"test_end", ""},
        // finetune / evaluate / states
        {"pretrained", ""},
        {"checkpoint", ""},
        {"states_basin", ""},
        {"states_from", ""},
        {"states_to", ""},
        // simulate
        {"fleet_basins", "6"},
        {"fleet_years", "10"},
        {"fleet_regime", "gradient"},
        {"fleet_perturbation", "0.25"},
        {"fleet_jitter", "0.1"},
        {"fleet_steps_per_year", "1460"},
        {"fleet_train_years", "6"},
        {"fleet_val_years", "2"},
        // trends
        {"trends_ensemble", "3"},
        {"trends_limited_years", "2"},
        {"trends_global_years", "1"},
    };
    return d;
}

const std::map<std::string, std::map<std::string, std::string>>& presets()
{
    static const std::map<std::string, std::map<std::string, std::string>> p = {
        {"nws-ncrfc",
         {{"T_in", "720"}, {"K", "28"}, {"h_enc", "11"}, {"d_z", "32"}, {"mlp_hidden", "32"}, {"m", "4"},
          {"s", "28"}, {"lr", "0.001"}, {"batch_size", "64"}, {"fleet_steps_per_year", "1460"}}},
        {"camels",
         {{"T_in", "365"}, {"K", "7"}, {"h_enc", "85"}, {"d_z", "255"}, {"mlp_hidden", "255"}, {"m", "7"},
          {"s", "30"}, {"lr", "0.001"}, {"batch_size", "64"}, {"fleet_steps_per_year", "365"}}},
        {"desk",
         {{"T_in", "120"}, {"K", "7"}, {"h_enc", "8"}, {"d_z", "16"}, {"mlp_hidden", "16"}, {"m", "7"},
          {"s", "30"}, {"lr", "0.003"}, {"batch_size", "32"}, {"max_epochs", "60"}, {"patience", "10"},
          {"train_stride", "2"}, {"ensemble", "3"}, {"fleet_steps_per_year", "365"}, {"fleet_basins", "6"},
          {"fleet_years", "10"}}},
    };
    return p;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

RunConfig::RunConfig() : values_(defaults()) {}

const std::vector<std::string>& RunConfig::preset_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : presets())
            n.push_back(k);
        return n;
    }();
    return names;
}

void RunConfig::set(const std::string& key, const std::string& value)
{
    if (!values_.count(key))
        throw ConfigError("unknown config key '" + key + "'");
    if (key == "preset") {
        if (!value.empty())
            apply_preset(value);
        values_[key] = value;
        return;
    }
    values_[key] = value;
}

void RunConfig::apply_preset(const std::string& name)
{
    const auto it = presets().find(name);
    if (it == presets().end())
        throw ConfigError("unknown preset '" + name + "'");
    for (const auto& [k, v] : it->second)
        values_[k] = v;
    values_["preset"] = name;
}

RunConfig RunConfig::from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config '" + path + "'");
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<std::size_t> lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty() || line[0] == '[')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        lines.push_back(line_no);
    }
    RunConfig cfg;
    // The preset goes first so explicit keys override it wherever they appear.
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].first == "preset") {
            try {
                cfg.set("preset", entries[i].second);
            } catch (const ConfigError& e) {
                throw ConfigError(path + ":" + std::to_string(lines[i]) + ": key 'preset': " + e.what());
            }
        }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first == "preset")
            continue;
        try {
            cfg.set(entries[i].first, entries[i].second);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lines[i]) + ": " + e.what());
        }
    }
    return cfg;
}

std::vector<std::string> RunConfig::apply_env()
{
    std::vector<std::string> applied;
    auto env_name = [](const std::string& key) {
        std::string n = "FHNN_";
        for (char c : key)
            n += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return n;
    };
    if (const char* p = std::getenv(env_name("preset").c_str()); p && *p) {
        set("preset", p);
        applied.push_back("preset");
    }
    const auto keys = [&] {
        std::vector<std::string> k;
        for (const auto& [key, v] : values_)
            k.push_back(key);
        return k;
    }();
    for (const auto& key : keys) {
        if (key == "preset")
            continue;
        if (const char* v = std::getenv(env_name(key).c_str())) {
            set(key, v);
            applied.push_back(key);
        }
    }
    return applied;
}

const std::string& RunConfig::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double RunConfig::num(const std::string& key) const
{
    const std::string& s = get(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
    return v;
}

std::size_t RunConfig::count(const std::string& key) const
{
    const std::string& s = get(key);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("config key '" + key + "': '" + s + "' is not a nonnegative integer");
    return v;
}

bool RunConfig::flag(const std::string& key) const
{
    const std::string& s = get(key);
    if (s == "1" || s == "true" || s == "yes" || s == "on")
        return true;
    if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty())
        return false;
    throw ConfigError("config key '" + key + "': '" + s + "' is not a boolean");
}

std::vector<std::string> RunConfig::list(const std::string& key) const
{
    std::vector<std::string> out;
    std::stringstream in(get(key));
    std::string item;
    while (std::getline(in, item, ','))
        if (!trim(item).empty())
            out.push_back(trim(item));
    return out;
}

std::string RunConfig::snapshot() const
{
    std::string out;
    for (const auto& [k, v] : values_)
        out += k + "=" + v + "\n";
    return out;
}

void RunConfig::write_snapshot(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << snapshot()))
        throw IoError("cannot write '" + path + "'");
}

ModelConfig RunConfig::model_config(std::size_t d_x) const
{
    ModelConfig mc;
    try {
        mc.kind = parse_model_kind(get("model"));
    } catch (const Error& e) {
        throw ConfigError(std::string("config key 'model': ") + e.what());
    }
    mc.d_x = d_x;
    mc.h_enc = count("h_enc");
    mc.m = count("m");
    mc.s = count("s");
    mc.d_z = count("d_z");
    mc.mlp_hidden = count("mlp_hidden");
    mc.input_length = count("T_in");
    mc.horizon = count("K");
    mc.z_to_cell = flag("z_to_cell");
    mc.teacher_forcing = flag("teacher_forcing") && mc.kind == ModelKind::lstm_ar;
    try {
        mc.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("model configuration: ") + e.what());
    }
    return mc;
}

TrainConfig RunConfig::train_config() const
{
    TrainConfig tc;
    tc.lr = num("lr");
    tc.batch_size = count("batch_size");
    tc.max_epochs = count("max_epochs");
    tc.patience = count("patience");
    tc.seed = count("seed");
    tc.grad_clip = num("grad_clip");
    tc.teacher_forcing = flag("teacher_forcing");
    tc.threads = std::max<std::size_t>(1, count("threads"));
    const std::string metric = get("select_metric");
    if (metric != "pooled" && metric != "windowed")
        throw ConfigError("config key 'select_metric' must be pooled or windowed");
    tc.select_windowed = metric == "windowed";
    tc.validate();
    return tc;
}

WindowSpec RunConfig::window_spec() const
{
    WindowSpec ws;
    ws.input_length = count("T_in");
    ws.horizon = count("K");
    ws.stride = count("train_stride");
    if (ws.input_length == 0 || ws.horizon == 0 || ws.stride == 0)
        throw ConfigError("T_in, K and train_stride must be positive");
    return ws;
}

DataOptions RunConfig::data_options() const
{
    DataOptions d;
    d.window = window_spec();
    d.eval_stride = count("eval_stride");
    if (d.eval_stride == 0)
        throw ConfigError("config key 'eval_stride' must be positive");
    d.use_sim = get("mode") == "pretrain";
    return d;
}

FleetConfig RunConfig::fleet_config() const
{
    FleetConfig f;
    f.n_basins = count("fleet_basins");
    f.years = count("fleet_years");
    f.regime = get("fleet_regime");
    f.perturbation = num("fleet_perturbation");
    f.jitter = num("fleet_jitter");
    f.steps_per_year = count("fleet_steps_per_year");
    f.train_years = count("fleet_train_years");
    f.val_years = count("fleet_val_years");
    f.seed = count("seed");
    f.validate();
    return f;
}

} // namespace fhnn

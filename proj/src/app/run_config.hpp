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

#include "data/windows.hpp"
#include "model/model_config.hpp"
#include "synth/fleet.hpp"
#include "training/dataset.hpp"
#include "training/trainer.hpp"

#include <map>
#include <string>
#include <vector>

namespace fhnn {

/// Flat key=value experiment configuration. Every key has a default;
/// precedence is defaults < preset < file < FHNN_<KEY> environment < set().
class RunConfig
{
public:
    RunConfig();

    static RunConfig from_file(const std::string& path);
    static const std::vector<std::string>& preset_names();

    // Throws ConfigError for unknown keys or presets.
    void set(const std::string& key, const std::string& value);
    void apply_preset(const std::string& name);
    // FHNN_<KEY> with the key upper-cased; returns the keys overridden.
    std::vector<std::string> apply_env();

    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string str(const std::string& key) const { return get(key); }
    double num(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<std::string> list(const std::string& key) const;

    // Resolved snapshot, one key=value per line in key order.
    std::string snapshot() const;
    void write_snapshot(const std::string& path) const;

    ModelConfig model_config(std::size_t d_x) const;
    TrainConfig train_config() const;
    DataOptions data_options() const;
    WindowSpec window_spec() const;
    FleetConfig fleet_config() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace fhnn

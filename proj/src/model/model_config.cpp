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

#include "model/model_config.hpp"

#include "numerics/errors.hpp"

namespace fhnn {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::fhnn: return "fhnn";
    case ModelKind::fhnn_single: return "fhnn_single";
    case ModelKind::lstm: return "lstm";
    case ModelKind::lstm_ar: return "lstm_ar";
    }
    return "unknown";
}

ModelKind parse_model_kind(const std::string& name)
{
    if (name == "fhnn")
        return ModelKind::fhnn;
    if (name == "fhnn_single")
        return ModelKind::fhnn_single;
    if (name == "lstm")
        return ModelKind::lstm;
    if (name == "lstm_ar")
        return ModelKind::lstm_ar;
    throw ConfigError("unknown model kind '" + name + "' (expected fhnn, fhnn_single, lstm, lstm_ar)");
}

void ModelConfig::validate() const
{
    const auto fail = [](const std::string& msg) { throw ConfigError("model config: " + msg); };
    if (d_x == 0)
        fail("d_x must be positive");
    if (d_z == 0 || h_enc == 0 || mlp_hidden == 0)
        fail("layer widths must be positive");
    if (input_length == 0)
        fail("input length must be positive");
    if (horizon == 0)
        fail("forecast horizon K must be positive");
    if (kind == ModelKind::fhnn) {
        if (m < 1 || s < 1)
            fail("strides m and s must be >= 1");
        if (m > s)
            fail("medium stride m=" + std::to_string(m) + " exceeds slow stride s=" + std::to_string(s));
        if (s > input_length)
            fail("input length " + std::to_string(input_length) + " is shorter than slow stride s=" +
                 std::to_string(s));
    }
}

Metadata ModelConfig::to_metadata() const
{
    return {{"model.kind", to_string(kind)},
            {"model.d_x", std::to_string(d_x)},
            {"model.h_enc", std::to_string(h_enc)},
            {"model.m", std::to_string(m)},
            {"model.s", std::to_string(s)},
            {"model.d_z", std::to_string(d_z)},
            {"model.mlp_hidden", std::to_string(mlp_hidden)},
            {"model.T", std::to_string(input_length)},
            {"model.K", std::to_string(horizon)},
            {"model.z_to_cell", z_to_cell ? "1" : "0"},
            {"model.teacher_forcing", teacher_forcing ? "1" : "0"}};
}

ModelConfig ModelConfig::from_metadata(const Metadata& meta)
{
    const auto get = [&](const std::string& key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end())
            throw ConfigError("checkpoint is missing '" + key + "'");
        return it->second;
    };
    const auto num = [&](const std::string& key) {
        try {
            return static_cast<std::size_t>(std::stoull(get(key)));
        } catch (const std::logic_error&) {
            throw ConfigError("checkpoint entry '" + key + "' is not a count");
        }
    };
    ModelConfig cfg;
    cfg.kind = parse_model_kind(get("model.kind"));
    cfg.d_x = num("model.d_x");
    cfg.h_enc = num("model.h_enc");
    cfg.m = num("model.m");
    cfg.s = num("model.s");
    cfg.d_z = num("model.d_z");
    cfg.mlp_hidden = num("model.mlp_hidden");
    cfg.input_length = num("model.T");
    cfg.horizon = num("model.K");
    cfg.z_to_cell = get("model.z_to_cell") == "1";
    cfg.teacher_forcing = get("model.teacher_forcing") == "1";
    cfg.validate();
    return cfg;
}

} // namespace fhnn

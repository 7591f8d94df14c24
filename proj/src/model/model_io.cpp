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

#include "model/model_io.hpp"

namespace fhnn {

void save_model(const std::string& path, const Forecaster& model, const Metadata& extra)
{
    Metadata meta = extra;
    for (auto& [key, value] : model.config().to_metadata())
        meta[key] = value;
    write_checkpoint(path, model.params(), meta);
}

LoadedModel load_model(const std::string& path)
{
    Checkpoint ckpt = read_checkpoint(path);
    const ModelConfig cfg = ModelConfig::from_metadata(ckpt.metadata);
    return {make_forecaster(cfg, std::move(ckpt.params)), std::move(ckpt.metadata)};
}

} // namespace fhnn

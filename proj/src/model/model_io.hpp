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

#include "model/forecaster.hpp"
#include "numerics/checkpoint.hpp"

#include <memory>
#include <string>

namespace fhnn {

struct LoadedModel
{
    std::unique_ptr<Forecaster> model;
    Metadata metadata; // config record plus any caller-supplied entries
};

// Writes params with the model config record merged into `extra`.
void save_model(const std::string& path, const Forecaster& model, const Metadata& extra = {});
// Validates the dimension chain against the embedded config.
LoadedModel load_model(const std::string& path);

} // namespace fhnn

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

#include "numerics/param_set.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace fhnn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

using Metadata = std::map<std::string, std::string>;

struct Checkpoint
{
    Metadata metadata;
    ParamSet params;
};

// Binary layout, little-endian:
//   "FHNNCKPT" | u32 version | u32 metadata bytes | metadata ("key=value\n"...)
//   | u64 record count | records: u32 name bytes, name, u64 rows, u64 cols, f64[rows*cols]
void write_checkpoint(const std::string& path, const ParamSet& params, const Metadata& metadata);
Checkpoint read_checkpoint(const std::string& path);

} // namespace fhnn

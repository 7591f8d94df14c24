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

#include "data/basin_series.hpp"
#include "data/windows.hpp"

#include <map>
#include <string>
#include <vector>

namespace fhnn {

/// Dataset index in key=value lines:
///   train_end=2005-12-31
///   basin.<id>=<csv path, relative to the manifest>
///   attr.<id>.<name>=<value>
/// Basins keep their order of appearance.
struct Manifest
{
    struct Entry
    {
        std::string id;
        std::string path; // as written in the file
        std::map<std::string, std::string> attributes;
    };

    std::string directory; // directory of the manifest file, for relative paths
    SplitSpec split;
    std::vector<Entry> basins;

    const Entry& find(const std::string& id) const;
    std::string resolve(const Entry& entry) const;
    BasinSeries load(const Entry& entry) const;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

} // namespace fhnn

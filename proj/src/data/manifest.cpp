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

#include "data/manifest.hpp"

#include "numerics/errors.hpp"

#include <filesystem>
#include <fstream>

namespace fhnn {

namespace fs = std::filesystem;

namespace {

bool starts_with(const std::string& s, const std::string& prefix)
{
    return s.compare(0, prefix.size(), prefix) == 0;
}

} // namespace

const Manifest::Entry& Manifest::find(const std::string& id) const
{
    for (const auto& e : basins)
        if (e.id == id)
            return e;
    throw DataError("manifest has no basin '" + id + "'");
}

std::string Manifest::resolve(const Entry& entry) const
{
    const fs::path p(entry.path);
    return p.is_absolute() || directory.empty() ? p.string() : (fs::path(directory) / p).string();
}

BasinSeries Manifest::load(const Entry& entry) const
{
    return read_basin_csv(resolve(entry), entry.id);
}

Manifest read_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open manifest '" + path + "'");
    Manifest m;
    m.directory = fs::path(path).parent_path().string();
    bool have[3] = {false, false, false};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw DataError(where + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "train_end") {
                m.split.train_end = parse_timestamp(value);
                have[0] = true;
            } else if (key == "val_end") {
                m.split.val_end = parse_timestamp(value);
                have[1] = true;
            } else if (key == "test_end") {
                m.split.test_end = parse_timestamp(value);
                have[2] = true;
            } else if (starts_with(key, "basin.")) {
                const std::string id = key.substr(6);
                if (id.empty() || id.find('.') != std::string::npos)
                    throw DataError("bad basin id '" + id + "'");
                for (const auto& e : m.basins)
                    if (e.id == id)
                        throw DataError("duplicate basin '" + id + "'");
                m.basins.push_back({id, value, {}});
            } else if (starts_with(key, "attr.")) {
                const auto dot = key.find('.', 5);
                if (dot == std::string::npos)
                    throw DataError("bad attribute key '" + key + "'");
                const std::string id = key.substr(5, dot - 5);
                bool found = false;
                for (auto& e : m.basins)
                    if (e.id == id) {
                        e.attributes[key.substr(dot + 1)] = value;
                        found = true;
                    }
                if (!found)
                    throw DataError("attribute for undeclared basin '" + id + "'");
            } else {
                throw DataError("unknown key '" + key + "'");
            }
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    if (!(have[0] && have[1] && have[2]))
        throw DataError(path + ": train_end, val_end and test_end are required");
    if (m.basins.empty())
        throw DataError(path + ": no basins listed");
    try {
        m.split.validate();
    } catch (const ConfigError& e) {
        throw DataError(path + ": " + e.what());
    }
    return m;
}

void write_manifest(const std::string& path, const Manifest& manifest)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << "train_end=" << format_timestamp(manifest.split.train_end) << '\n'
        << "val_end=" << format_timestamp(manifest.split.val_end) << '\n'
        << "test_end=" << format_timestamp(manifest.split.test_end) << '\n';
    for (const auto& e : manifest.basins)
        out << "basin." << e.id << '=' << e.path << '\n';
    for (const auto& e : manifest.basins)
        for (const auto& [k, v] : e.attributes)
            out << "attr." << e.id << '.' << k << '=' << v << '\n';
    if (!out)
        throw IoError("cannot write '" + path + "'");
}

} // namespace fhnn

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

#include "numerics/checkpoint.hpp"

#include "numerics/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fhnn {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'F', 'H', 'N', 'N', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ostream& out, const T& value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in)
        throw IoError("truncated checkpoint: " + path);
    return value;
}

std::string get_bytes(std::istream& in, std::size_t n, const std::string& path)
{
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in)
        throw IoError("truncated checkpoint: " + path);
    return s;
}

} // namespace

void write_checkpoint(const std::string& path, const ParamSet& params, const Metadata& metadata)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write checkpoint: " + path);

    std::string meta;
    for (const auto& [key, value] : metadata) {
        if (key.find_first_of("=\n") != std::string::npos || value.find('\n') != std::string::npos)
            throw ConfigError("checkpoint metadata entry '" + key + "' contains a reserved character");
        meta += key + "=" + value + "\n";
    }

    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    put<std::uint64_t>(out, params.size());
    for (const auto& p : params) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
        out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        put<std::uint64_t>(out, p.value.rows());
        put<std::uint64_t>(out, p.value.cols());
        out.write(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    }
    if (!out)
        throw IoError("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open checkpoint: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("not a checkpoint file: " + path);
    const auto version = get<std::uint32_t>(in, path);
    if (version != kCheckpointVersion)
        throw IoError("unsupported checkpoint version " + std::to_string(version) + " in " + path);

    Checkpoint ckpt;
    const auto meta_bytes = get<std::uint32_t>(in, path);
    std::istringstream meta(get_bytes(in, meta_bytes, path));
    for (std::string line; std::getline(meta, line);) {
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("malformed checkpoint metadata line '" + line + "' in " + path);
        ckpt.metadata[line.substr(0, eq)] = line.substr(eq + 1);
    }

    const auto count = get<std::uint64_t>(in, path);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto name_len = get<std::uint32_t>(in, path);
        std::string name = get_bytes(in, name_len, path);
        const auto rows = get<std::uint64_t>(in, path);
        const auto cols = get<std::uint64_t>(in, path);
        std::vector<double> data(rows * cols);
        in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
        if (!in)
            throw IoError("truncated checkpoint: " + path);
        ckpt.params.add(std::move(name), Matrix(rows, cols, std::move(data)));
    }
    return ckpt;
}

} // namespace fhnn

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

#include <stdexcept>
#include <string>

namespace fhnn {

// Categories map one-to-one onto the C API status codes.
enum class ErrorKind { internal, config, data, divergence, shape, numeric, io };

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ShapeError : Error
{
    explicit ShapeError(const std::string& what) : Error(ErrorKind::shape, what) {}
};

struct NumericError : Error
{
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

struct ConfigError : Error
{
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct DataError : Error
{
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

struct DivergenceError : Error
{
    explicit DivergenceError(const std::string& what) : Error(ErrorKind::divergence, what) {}
};

struct IoError : Error
{
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

} // namespace fhnn

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

#include "numerics/matrix.hpp"

#include <cstddef>
#include <cstdint>

namespace fhnn {

/// One sample: T history steps of drivers and response, K forecast steps.
struct Window
{
    Matrix x_hist; // T x d_x
    Matrix y_hist; // T x 1
    Matrix x_fcst; // K x d_x
    Matrix y_fcst; // K x 1
    std::size_t basin = 0;
    std::int64_t t_start = 0; // timestamp of the first history step
};

} // namespace fhnn

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

#include <cstdint>
#include <string>

namespace fhnn {

// Seconds since 1970-01-01T00:00:00 UTC.
using Timestamp = std::int64_t;

// Accepts YYYY-MM-DD, YYYY-MM-DDTHH:MM, YYYY-MM-DDTHH:MM:SS (a space may
// replace the T, a trailing Z is ignored). Throws DataError otherwise.
Timestamp parse_timestamp(const std::string& text);
// Always YYYY-MM-DDTHH:MM:SS.
std::string format_timestamp(Timestamp t);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0);

} // namespace fhnn

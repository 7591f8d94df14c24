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

#include "data/timestamp.hpp"

#include "numerics/errors.hpp"

#include <chrono>
#include <cstdio>

namespace fhnn {

namespace {

constexpr std::int64_t seconds_per_day = 86400;

std::int64_t days_from_civil(int year, unsigned month, unsigned day)
{
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok())
        return INT64_MIN;
    return sys_days{ymd}.time_since_epoch().count();
}

} // namespace

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour)
{
    const std::int64_t days = days_from_civil(year, month, day);
    if (days == INT64_MIN)
        throw DataError("invalid calendar date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                        std::to_string(day));
    return days * seconds_per_day + static_cast<std::int64_t>(hour) * 3600;
}

Timestamp parse_timestamp(const std::string& text)
{
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int consumed = 0;
    const char* str = text.c_str();
    if (std::sscanf(str, "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3)
        throw DataError("malformed timestamp '" + text + "'");
    const char* rest = str + consumed;
    if (*rest == 'T' || *rest == ' ') {
        sep = *rest;
        int more = 0;
        if (std::sscanf(rest + 1, "%2d:%2d%n", &h, &mi, &more) != 2)
            throw DataError("malformed timestamp '" + text + "'");
        rest += 1 + more;
        if (*rest == ':') {
            if (std::sscanf(rest + 1, "%2d%n", &s, &more) != 1)
                throw DataError("malformed timestamp '" + text + "'");
            rest += 1 + more;
        }
    }
    (void)sep;
    if (*rest == 'Z')
        ++rest;
    if (*rest != '\0' || mo < 1 || d < 1 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59)
        throw DataError("malformed timestamp '" + text + "'");
    const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    if (days == INT64_MIN)
        throw DataError("invalid calendar date in '" + text + "'");
    return days * seconds_per_day + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp t)
{
    using namespace std::chrono;
    std::int64_t days = t / seconds_per_day;
    std::int64_t secs = t % seconds_per_day;
    if (secs < 0) {
        secs += seconds_per_day;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()), int(secs / 3600), int(secs / 60 % 60), int(secs % 60));
    return buf;
}

} // namespace fhnn

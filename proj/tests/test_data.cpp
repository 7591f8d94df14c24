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

#include "doctest.h"
#include "test_util.hpp"

#include "data/basin_series.hpp"
#include "data/manifest.hpp"
#include "data/normalize.hpp"
#include "data/timestamp.hpp"
#include "data/windows.hpp"
#include "numerics/errors.hpp"
#include "training/dataset.hpp"

#include <fstream>

using namespace fhnn;

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream(path) << text;
}

BasinSeries ramp_series(std::size_t n, std::int64_t step = 86400)
{
    BasinSeries s;
    s.basin_id = "ramp";
    s.driver_names = {"precip", "temp"};
    s.drivers = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        s.timestamps.push_back(make_timestamp(2000, 1, 1) + static_cast<std::int64_t>(i) * step);
        s.drivers(i, 0) = static_cast<double>(i % 5);
        s.drivers(i, 1) = 10.0 + static_cast<double>(i % 7);
        s.response.push_back(0.5 * static_cast<double>(i));
    }
    return s;
}

} // namespace

TEST_CASE("timestamps parse and format")
{
    const Timestamp t = parse_timestamp("2001-03-04T06:30:00");
    CHECK(format_timestamp(t) == "2001-03-04T06:30:00");
    CHECK(parse_timestamp("2001-03-04") == make_timestamp(2001, 3, 4));
    CHECK(parse_timestamp("2001-03-04 06:00") == make_timestamp(2001, 3, 4, 6));
    CHECK(parse_timestamp("2001-03-04T06:00Z") == make_timestamp(2001, 3, 4, 6));
    CHECK(make_timestamp(1970, 1, 2) == 86400);
    CHECK_THROWS_AS(parse_timestamp("2001-13-01"), DataError);
    CHECK_THROWS_AS(parse_timestamp("yesterday"), DataError);
}

TEST_CASE("a 3-row csv gives a series of length 3")
{
    const auto dir = fhnn::testing::scratch_dir("data_csv");
    write_file(dir / "a.csv", "timestamp,precip,temp,flow\n"
                              "2000-01-01,1.0,5.0,0.1\n"
                              "2000-01-02,0.0,6.0,0.2\n"
                              "2000-01-03,2.5,4.0,0.3\n");
    const BasinSeries s = read_basin_csv((dir / "a.csv").string(), "a");
    CHECK(s.length() == 3);
    CHECK(s.driver_count() == 2);
    CHECK(s.driver_names == std::vector<std::string>{"precip", "temp"});
    CHECK(s.drivers(2, 0) == 2.5);
    CHECK(s.response[1] == 0.2);
    CHECK_FALSE(s.sim_response.has_value());
    CHECK(s.step_seconds() == 86400);
}

TEST_CASE("a gap in timestamps names the offending row")
{
    const auto dir = fhnn::testing::scratch_dir("data_gap");
    write_file(dir / "g.csv", "timestamp,precip,flow\n"
                              "2000-01-01,1,0.1\n"
                              "2000-01-02,1,0.1\n"
                              "2000-01-04,1,0.1\n");
    try {
        read_basin_csv((dir / "g.csv").string(), "g");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2000-01-04") != std::string::npos);
        CHECK(msg.find("step") != std::string::npos);
    }
}

TEST_CASE("malformed csv lines report file and line")
{
    const auto dir = fhnn::testing::scratch_dir("data_bad");
    write_file(dir / "b.csv", "timestamp,precip,flow\n2000-01-01,1,0.1\n2000-01-02,x,0.1\n");
    try {
        read_basin_csv((dir / "b.csv").string(), "b");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("b.csv:3") != std::string::npos);
    }
    write_file(dir / "h.csv", "time,precip,flow\n2000-01-01,1,0.1\n");
    CHECK_THROWS_AS(read_basin_csv((dir / "h.csv").string(), "h"), DataError);
    CHECK_THROWS_AS(read_basin_csv((dir / "missing.csv").string(), "m"), DataError);
}

TEST_CASE("csv round trip is exact, including sim_flow")
{
    BasinSeries s = ramp_series(20, 6 * 3600);
    s.response[3] = 0.1 + 0.2;
    s.sim_response = std::vector<double>(20, 1.0 / 3.0);
    const auto dir = fhnn::testing::scratch_dir("data_roundtrip");
    write_basin_csv((dir / "r.csv").string(), s);
    const BasinSeries back = read_basin_csv((dir / "r.csv").string(), "ramp");
    CHECK(back.timestamps == s.timestamps);
    CHECK(back.drivers == s.drivers);
    CHECK(back.response == s.response);
    REQUIRE(back.sim_response.has_value());
    CHECK(*back.sim_response == *s.sim_response);
}

TEST_CASE("normalization: mean 10, std 2 maps 14 to 2")
{
    const std::vector<double> v = {8.0, 12.0, 8.0, 12.0};
    const auto f = fit_feature(v);
    CHECK(f.mean == 10.0);
    CHECK(f.std == 2.0);
    CHECK_FALSE(f.constant);
    CHECK(f.apply(14.0) == 2.0);
    CHECK(f.invert(2.0) == 14.0);
}

TEST_CASE("a constant feature is flagged and passed through")
{
    const std::vector<double> v = {3.0, 3.0, 3.0};
    const auto f = fit_feature(v);
    CHECK(f.constant);
    CHECK(f.apply(3.0) == 3.0);
    CHECK(f.apply(-7.5) == -7.5);
    CHECK(f.invert(4.25) == 4.25);
}

TEST_CASE("norm stats fit on the training range only and survive metadata")
{
    BasinSeries s = ramp_series(10);
    const NormStats st = fit_norm(s, {0, 4});
    CHECK(st.response.mean == doctest::Approx(0.75));
    const BasinSeries n = apply_norm(s, st);
    CHECK(n.response[0] == doctest::Approx((0.0 - 0.75) / st.response.std));
    const auto back = invert_response(n.response, st);
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(back[i] == doctest::Approx(s.response[i]).epsilon(1e-14));

    const NormStats rt = NormStats::from_metadata(st.to_metadata());
    CHECK(rt.drivers.size() == 2);
    CHECK(rt.response.mean == st.response.mean);
    CHECK(rt.response.std == st.response.std);
    CHECK(rt.drivers[1].mean == st.drivers[1].mean);
}

TEST_CASE("window counts: 748 rows give 1 window, 750 give 3")
{
    const WindowSpec spec{720, 28, 1};
    CHECK(make_windows(ramp_series(748, 6 * 3600), spec).size() == 1);
    CHECK(make_windows(ramp_series(750, 6 * 3600), spec).size() == 3);
    CHECK_THROWS_AS(make_windows(ramp_series(747, 6 * 3600), spec), DataError);
}

TEST_CASE("window count formula floor((n - T - K) / stride) + 1")
{
    for (std::size_t n = 12; n < 40; n += 3)
        for (std::size_t stride = 1; stride <= 4; ++stride) {
            const WindowSpec spec{6, 4, stride};
            CHECK(make_windows(ramp_series(n), spec).size() == (n - 10) / stride + 1);
        }
}

TEST_CASE("windows slice history and forecast rows")
{
    const BasinSeries s = ramp_series(30);
    const WindowSpec spec{5, 3, 2};
    const auto ws = make_windows(s, spec);
    const Window& w = ws[1];
    CHECK(w.t_start == s.timestamps[2]);
    CHECK(w.y_hist(0, 0) == s.response[2]);
    CHECK(w.y_hist(4, 0) == s.response[6]);
    CHECK(w.y_fcst(0, 0) == s.response[7]);
    CHECK(w.x_fcst(2, 1) == s.drivers(9, 1));
}

TEST_CASE("window starts keep targets inside the range")
{
    const WindowSpec spec{4, 2, 1};
    const auto starts = window_starts(spec, {10, 20});
    REQUIRE_FALSE(starts.empty());
    CHECK(starts.front() == 6);
    CHECK(starts.back() == 14);
    for (auto st : starts) {
        CHECK(st + 4 >= 10);
        CHECK(st + 4 + 2 <= 20);
    }
    CHECK(window_starts(spec, {10, 20}, 8).front() == 8);
    CHECK(window_starts(spec, {0, 5}).empty());
}

TEST_CASE("split ranges are contiguous and inclusive of the end dates")
{
    const BasinSeries s = ramp_series(30);
    SplitSpec split{s.timestamps[9], s.timestamps[19], s.timestamps[29]};
    const auto r = split_ranges(s, split);
    CHECK(r.train.begin == 0);
    CHECK(r.train.end == 10);
    CHECK(r.val.begin == 10);
    CHECK(r.val.end == 20);
    CHECK(r.test.end == 30);
    CHECK(tail(r.train, 4).begin == 6);
    CHECK(tail(r.train, 0).begin == 0);
    split.test_end = s.timestamps[29] + 86400;
    CHECK_THROWS_AS(split_ranges(s, split), DataError);
}

TEST_CASE("one-hot basin codes")
{
    CHECK(one_hot_basin(2, 4) == std::vector<double>{0, 0, 1, 0});
    CHECK(one_hot_basin(0, 1) == std::vector<double>{1});
    CHECK_THROWS(one_hot_basin(4, 4));
    const Matrix m = append_one_hot(Matrix(3, 2, 5.0), 1, 3);
    CHECK(m.cols() == 5);
    CHECK(m(2, 1) == 5.0);
    CHECK(m(2, 3) == 1.0);
    CHECK(m(0, 4) == 0.0);
}

TEST_CASE("manifest round trip resolves relative paths")
{
    const auto dir = fhnn::testing::scratch_dir("data_manifest");
    const BasinSeries s = ramp_series(30);
    write_basin_csv((dir / "ramp.csv").string(), s);
    Manifest m;
    m.split = {s.timestamps[9], s.timestamps[19], s.timestamps[29]};
    m.basins.push_back({"ramp", "ramp.csv", {{"runoff_ratio", "0.25"}}});
    write_manifest((dir / "manifest.txt").string(), m);

    const Manifest back = read_manifest((dir / "manifest.txt").string());
    CHECK(back.split.train_end == m.split.train_end);
    CHECK(back.split.test_end == m.split.test_end);
    REQUIRE(back.basins.size() == 1);
    CHECK(back.find("ramp").attributes.at("runoff_ratio") == "0.25");
    CHECK(back.load(back.basins[0]).response == s.response);
    CHECK_THROWS_AS(back.find("nope"), DataError);

    write_file(dir / "bad.txt", "train_end=2000-01-10\nbogus line\n");
    CHECK_THROWS_AS(read_manifest((dir / "bad.txt").string()), DataError);
}

TEST_CASE("prepared basins normalise with training statistics")
{
    const BasinSeries s = ramp_series(60);
    const SplitSpec split{s.timestamps[29], s.timestamps[44], s.timestamps[59]};
    DataOptions opts;
    opts.window = {5, 3, 1};
    const PreparedBasin pb = prepare_basin(s, split, opts);
    CHECK(pb.train_starts.size() == 30 - 8 + 1);
    CHECK(pb.test_starts.front() == 45 - 5);
    CHECK(pb.test_starts.back() == 60 - 8);
    const auto obs = pb.observed(opts.window, pb.test_starts.front());
    CHECK(obs[0] == doctest::Approx(s.response[45]).epsilon(1e-14));

    DataOptions limited = opts;
    limited.train_steps = 10;
    const PreparedBasin lb = prepare_basin(s, split, limited);
    CHECK(lb.train_range.begin == 20);
    CHECK(lb.train_starts.front() == 20);
    CHECK(lb.train_starts.size() == 10 - 8 + 1);

    const PreparedBasin gb = prepare_basin(s, split, opts, std::nullopt, std::make_pair(std::size_t{1}, std::size_t{3}));
    CHECK(gb.drivers.cols() == 5);
    CHECK(gb.window(opts.window, 0, 1).x_hist(0, 3) == 1.0);
}

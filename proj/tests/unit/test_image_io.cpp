/*
 * Copyright (C) 2026 The panoloom authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <panoloom/errors.hpp>
#include <panoloom/image_io.hpp>
#include <panoloom/reports.hpp>
#include <panoloom/rng.hpp>

#include "test_utils.hpp"

using namespace panoloom;
using panoloom::testing::TempDir;

namespace {

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("PNG round trip preserves every byte of an RGB image") {
    TempDir tmp("png");
    Rng rng(42);
    const Image img = panoloom::testing::random_image(37, 21, rng);
    write_png(img, tmp.file("a.png"));
    const Image back = read_png(tmp.file("a.png"));
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.rgb == img.rgb);
}

TEST_CASE("read_png rejects garbage and missing files") {
    TempDir tmp("png_bad");
    std::ofstream(tmp.file("junk.png"), std::ios::binary) << "not a png at all";
    CHECK_THROWS_AS(read_png(tmp.file("junk.png")), Error);
    CHECK_THROWS_AS(read_png(tmp.file("missing.png")), Error);
}

TEST_CASE("ERPF round trip preserves float planes exactly") {
    TempDir tmp("erpf");
    FloatImage img(9, 5, 3);
    Rng rng(7);
    for (auto& v : img.data) v = static_cast<float>(rng.uniform_real(-4.0, 4.0));
    write_erpf(img, tmp.file("a.erpf"));
    const FloatImage back = read_erpf(tmp.file("a.erpf"));
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.channels == img.channels);
    CHECK(back.data == img.data);
}

TEST_CASE("truncated ERPF reports a parse error with a byte offset") {
    TempDir tmp("erpf_bad");
    FloatImage img(4, 4, 1);
    write_erpf(img, tmp.file("a.erpf"));
    // Chop the payload.
    std::string bytes = slurp(tmp.file("a.erpf"));
    std::ofstream(tmp.file("cut.erpf"), std::ios::binary)
        << bytes.substr(0, bytes.size() - 7);
    CHECK_THROWS_AS(read_erpf(tmp.file("cut.erpf")), ParseError);
}

TEST_CASE("write_csv quotes only what needs quoting") {
    TempDir tmp("csv");
    reports::write_csv({"id", "reason"},
                       {{"plain", "simple"},
                        {"with,comma", "say \"hi\""},
                        {"multi\nline", "ok"}},
                       tmp.file("t.csv"));
    const std::string text = slurp(tmp.file("t.csv"));
    CHECK(text == "id,reason\n"
                  "plain,simple\n"
                  "\"with,comma\",\"say \"\"hi\"\"\"\n"
                  "\"multi\nline\",ok\n");

    CHECK_THROWS_AS(reports::write_csv({"a", "b"}, {{"only-one"}}, tmp.file("bad.csv")),
                    DomainError);
}

TEST_CASE("write_json emits stable pretty output with a trailing newline") {
    TempDir tmp("json");
    reports::write_json({{"b", 2}, {"a", 1}}, tmp.file("t.json"));
    const std::string text = slurp(tmp.file("t.json"));
    CHECK(text == "{\n  \"a\": 1,\n  \"b\": 2\n}\n");
}

TEST_CASE("write_curve_svg draws one polyline per series and is deterministic") {
    TempDir tmp("svg");
    const reports::CurveSeries a{"raw", {1.0, 0.8, 0.4, 0.9, 1.0}};
    const reports::CurveSeries b{"dct", {1.0, 0.7, 0.55, 0.8, 0.95}};
    reports::write_curve_svg({a, b}, "t", "frame", "sim", tmp.file("c1.svg"));
    reports::write_curve_svg({a, b}, "t", "frame", "sim", tmp.file("c2.svg"));

    const std::string s1 = slurp(tmp.file("c1.svg"));
    CHECK(s1 == slurp(tmp.file("c2.svg")));
    CHECK(s1.find("<svg") == 0);
    std::size_t polylines = 0;
    for (std::size_t pos = s1.find("<polyline"); pos != std::string::npos;
         pos = s1.find("<polyline", pos + 1))
        ++polylines;
    CHECK(polylines == 2);

    CHECK_THROWS_AS(reports::write_curve_svg({}, "t", "x", "y", tmp.file("e.svg")),
                    DomainError);
}

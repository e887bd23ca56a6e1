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

#include <cmath>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include <panoloom/errors.hpp>
#include <panoloom/rng.hpp>
#include <panoloom/trajectory.hpp>

#include "test_utils.hpp"

using namespace panoloom;
using panoloom::testing::TempDir;

namespace {

CameraPath z_path(std::initializer_list<double> zs) {
    CameraPath p;
    for (double z : zs) p.positions.push_back({0.0, 0.0, z});
    return p;
}

} // namespace

TEST_CASE("validate_uniform flags the documented 18 percent deviation") {
    // Steps 1, 1, 1.3: mean 1.1, worst relative deviation 0.2/1.1 = 0.1818...
    const CameraPath path = z_path({0.0, 1.0, 2.0, 3.3});

    const auto report = validate_uniform(path); // default tolerance 0.10
    CHECK(report.mean_step == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(report.max_rel_deviation == doctest::Approx(0.2 / 1.1).epsilon(1e-12));
    CHECK_FALSE(report.pass);

    CHECK(validate_uniform(path, 0.20).pass);
}

TEST_CASE("validate_uniform needs movement and at least two frames") {
    CHECK_THROWS_AS(validate_uniform(z_path({1.0})), DomainError);
    CHECK_THROWS_AS(validate_uniform(z_path({1.0, 1.0, 1.0})), DegenerateStepError);
}

TEST_CASE("decompose emits unit flow rows and the scale against the reference step") {
    CameraPath path;
    Rng rng(3);
    Vec3 at{1.0, -2.0, 0.5};
    path.positions.push_back(at);
    for (int k = 0; k < 30; ++k) {
        // Random headings, constant step 0.2.
        const double a = rng.uniform_real(0.0, 6.28), b = rng.uniform_real(-0.8, 0.8);
        const Vec3 dir{std::cos(b) * std::sin(a), std::sin(b), std::cos(b) * std::cos(a)};
        at = at + 0.2 * dir;
        path.positions.push_back(at);
    }

    const FlowScale fs = decompose(path, 0.1);
    CHECK(fs.reference_step == 0.1);
    CHECK(fs.scale == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(fs.flow.size() == 30);
    for (std::size_t k = 0; k < fs.flow.size(); ++k) {
        CHECK(fs.flow[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
        const Vec3 step = path.positions[k + 1] - path.positions[k];
        CHECK((fs.flow[k] - step.normalized()).norm() < 1e-12);
    }
}

TEST_CASE("decompose rejects zero steps and non-uniform paths") {
    CHECK_THROWS_AS(decompose(z_path({0.0, 0.5, 0.5, 1.0}), 0.1), DegenerateStepError);
    CHECK_THROWS_AS(decompose(z_path({0.0, 1.0, 2.0, 3.3}), 0.1), ValidationError);
}

TEST_CASE("recompose inverts decompose for uniform paths") {
    const CameraPath path = standard_trajectory(TrajectoryKind::s_curve, 41, 0.15);
    const FlowScale fs = decompose(path, 0.15);
    const CameraPath back = recompose(fs, path.positions.front());
    REQUIRE(back.frames() == path.frames());
    for (int k = 0; k < path.frames(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        CHECK((back.positions[i] - path.positions[i]).norm() < 1e-9);
    }
}

TEST_CASE("recompose validates its inputs") {
    FlowScale fs;
    fs.reference_step = 0.1;
    fs.scale = 1.0;
    fs.flow = {{0.5, 0.0, 0.0}}; // not unit
    CHECK_THROWS_AS(recompose(fs), DomainError);
    fs.flow = {{1.0, 0.0, 0.0}};
    fs.scale = -1.0;
    CHECK_THROWS_AS(recompose(fs), DomainError);
}

TEST_CASE("straight standard trajectories move along the documented axes") {
    const double step = 0.25;
    const auto check_axis = [&](TrajectoryKind kind, const Vec3& axis) {
        const CameraPath p = standard_trajectory(kind, 11, step);
        REQUIRE(p.frames() == 11);
        CHECK(p.positions.front().norm() == 0.0);
        for (int k = 0; k < 11; ++k) {
            const Vec3 want = (k * step) * axis;
            CHECK((p.positions[static_cast<std::size_t>(k)] - want).norm() < 1e-12);
        }
    };
    check_axis(TrajectoryKind::forward, {0.0, 0.0, 1.0});
    check_axis(TrajectoryKind::backward, {0.0, 0.0, -1.0});
    check_axis(TrajectoryKind::left, {-1.0, 0.0, 0.0});
    check_axis(TrajectoryKind::right, {1.0, 0.0, 0.0});
}

TEST_CASE("s_curve weaves sideways yet keeps exactly equal chords") {
    const CameraPath p = standard_trajectory(TrajectoryKind::s_curve, 81, 0.1);
    REQUIRE(p.frames() == 81);

    const auto report = validate_uniform(p, 1e-6);
    CHECK(report.pass);
    CHECK(report.max_rel_deviation < 1e-9);

    // It must actually bend: x leaves zero, in both directions.
    double min_x = 0.0, max_x = 0.0;
    for (const Vec3& v : p.positions) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
    }
    CHECK(max_x > 0.1);
    CHECK(min_x < -0.1);

    // Sideways amplitude is a quarter of the forward extent.
    const double extent = p.positions.back().z - p.positions.front().z;
    CHECK(max_x == doctest::Approx(0.25 * extent).epsilon(2e-3));
}

TEST_CASE("loop closes on itself with equal steps") {
    const CameraPath p = standard_trajectory(TrajectoryKind::loop, 81, 0.1);
    REQUIRE(p.frames() == 81);
    CHECK((p.positions.back() - p.positions.front()).norm() < 1e-9);

    const auto report = validate_uniform(p, 1e-6);
    CHECK(report.pass);
    CHECK(report.mean_step == doctest::Approx(0.1).epsilon(1e-9));

    // The 80 equal chords subtend a circle, not a line.
    double max_x = 0.0;
    for (const Vec3& v : p.positions) max_x = std::max(max_x, std::abs(v.x));
    CHECK(max_x > 0.5);
}

TEST_CASE("standard_trajectory rejects bad arguments") {
    CHECK_THROWS_AS(standard_trajectory(TrajectoryKind::forward, 1, 0.1), DomainError);
    CHECK_THROWS_AS(standard_trajectory(TrajectoryKind::forward, 10, 0.0), DomainError);
    CHECK_THROWS_AS(standard_trajectory(TrajectoryKind::loop, 3, 0.1), DomainError);
    CHECK_THROWS_AS(trajectory_kind_from_string("sideways"), DomainError);
}

TEST_CASE("trajectory JSONL round trips and validates frame order") {
    TempDir tmp("traj");
    const CameraPath p = standard_trajectory(TrajectoryKind::loop, 17, 0.3);
    save_trajectory_jsonl(p, tmp.file("t.jsonl"));
    const CameraPath back = load_trajectory_jsonl(tmp.file("t.jsonl"));
    REQUIRE(back.frames() == p.frames());
    for (std::size_t k = 0; k < p.positions.size(); ++k) {
        CHECK(back.positions[k].x == p.positions[k].x);
        CHECK(back.positions[k].y == p.positions[k].y);
        CHECK(back.positions[k].z == p.positions[k].z);
    }

    std::ofstream(tmp.file("order.jsonl"))
        << R"({"frame":0,"x":0,"y":0,"z":0})" << "\n"
        << R"({"frame":2,"x":1,"y":0,"z":0})" << "\n";
    CHECK_THROWS_AS(load_trajectory_jsonl(tmp.file("order.jsonl")), ValidationError);

    std::ofstream(tmp.file("broken.jsonl"))
        << R"({"frame":0,"x":0,"y":0,"z":0})" << "\n"
        << R"({"frame":1,"x":)" << "\n";
    CHECK_THROWS_AS(load_trajectory_jsonl(tmp.file("broken.jsonl")), ParseError);
}

TEST_CASE("flow/scale JSON round trips and rejects non-unit flow") {
    TempDir tmp("flow");
    const CameraPath p = standard_trajectory(TrajectoryKind::s_curve, 21, 0.2);
    const FlowScale fs = decompose(p, 0.1);
    save_flow_scale_json(fs, tmp.file("f.json"));
    const FlowScale back = load_flow_scale_json(tmp.file("f.json"));
    CHECK(back.reference_step == fs.reference_step);
    CHECK(back.scale == fs.scale);
    REQUIRE(back.flow.size() == fs.flow.size());
    for (std::size_t k = 0; k < fs.flow.size(); ++k)
        CHECK((back.flow[k] - fs.flow[k]).norm() == 0.0);

    std::ofstream(tmp.file("bad.json"))
        << R"({"reference_step":0.1,"scale":1.0,"flow":[[0.5,0.0,0.0]]})";
    CHECK_THROWS_AS(load_flow_scale_json(tmp.file("bad.json")), ValidationError);
}

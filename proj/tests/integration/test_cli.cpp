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

// Drives the installed binary end to end through std::system; checks the
// artifact files and the documented exit codes rather than stdout text.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <panoloom/dataset_pipeline.hpp>
#include <panoloom/image_io.hpp>
#include <panoloom/rng.hpp>
#include <panoloom/trajectory.hpp>
#include <panoloom/trajectory_synthesis.hpp>

#include "test_utils.hpp"

using namespace panoloom;
using panoloom::testing::TempDir;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string("\"") + PANOLOOM_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const std::string& file) {
    return nlohmann::json::parse(slurp(file));
}

} // namespace

TEST_CASE("traj make writes a closing loop and a reproducible run.json") {
    TempDir tmp("cli_make");
    const std::string root = tmp.path().string();
    REQUIRE(run_cli("traj make --kind loop --frames 81 --step 0.1 --out " + root) == 0);

    const CameraPath path = load_trajectory_jsonl(tmp.file("trajectory.jsonl"));
    REQUIRE(path.frames() == 81);
    CHECK((path.positions.front() - path.positions.back()).norm() < 1e-9);

    const nlohmann::json run = read_json(tmp.file("run.json"));
    CHECK(run.at("tool") == "panoloom");
    CHECK(run.at("subcommand") == "traj make");
    CHECK(run.at("seed") == 0);
    CHECK_FALSE(run.contains("timestamp")); // reruns must be byte-identical

    // Same command, byte-identical artifacts.
    TempDir tmp2("cli_make2");
    REQUIRE(run_cli("traj make --kind loop --frames 81 --step 0.1 --out " +
                    tmp2.path().string()) == 0);
    CHECK(slurp(tmp.file("trajectory.jsonl")) == slurp(tmp2.file("trajectory.jsonl")));
}

TEST_CASE("exit codes separate usage, validation and parse failures") {
    TempDir tmp("cli_codes");
    const std::string root = tmp.path().string();
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("--bogus-flag") == 2);
    CHECK(run_cli("no-such-subcommand") == 2);

    // schedule with s < s': domain failure, exit 3.
    CHECK(run_cli("schedule --s 1 --s-prime 2 --f 81 --out " + root) == 3);
    // loop trajectories need at least 4 frames.
    CHECK(run_cli("traj make --kind loop --frames 3 --step 0.1 --out " + root) == 3);

    // render refuses non-2:1 ERP dimensions before reading anything.
    REQUIRE(run_cli("traj make --kind forward --frames 2 --step 0.1 --out " + root) == 0);
    CHECK(run_cli("render --traj " + tmp.file("trajectory.jsonl") +
                  " --width 100 --height 60 --out " + root) == 2);

    // eval psnr: mismatched frame counts and out-of-range windows, exit 3.
    const std::string gen = root + "/gen";
    const std::string ref = root + "/ref";
    fs::create_directories(gen);
    fs::create_directories(ref);
    Rng rng(1);
    for (int i = 0; i < 3; ++i)
        write_png(panoloom::testing::random_image(8, 4, rng),
                  gen + "/frame_0000" + std::to_string(i) + ".png");
    for (int i = 0; i < 2; ++i)
        write_png(panoloom::testing::random_image(8, 4, rng),
                  ref + "/frame_0000" + std::to_string(i) + ".png");
    CHECK(run_cli("eval psnr --gen " + gen + " --ref " + ref + " --windows 0:1 --out " + root) ==
          3);
    CHECK(run_cli("eval psnr --gen " + gen + " --ref " + gen + " --windows 0:5 --out " + root) ==
          3);
    // Exactly one of --frames/--features.
    CHECK(run_cli("eval curve --out " + root) == 2);
    CHECK(run_cli("eval curve --frames " + gen + " --features x.fseq --out " + root) == 2);
}

TEST_CASE("decompose then recompose returns the original trajectory") {
    TempDir tmp("cli_roundtrip");
    const std::string root = tmp.path().string();
    const std::string d1 = root + "/make";
    const std::string d2 = root + "/flow";
    const std::string d3 = root + "/back";
    REQUIRE(run_cli("traj make --kind s_curve --frames 41 --step 0.15 --out " + d1) == 0);
    REQUIRE(run_cli("traj decompose --traj " + d1 + "/trajectory.jsonl --out " + d2) == 0);
    REQUIRE(run_cli("traj recompose --flow " + d2 + "/flow_scale.json --origin 0,0,0 --out " +
                    d3) == 0);

    const CameraPath want = load_trajectory_jsonl(d1 + "/trajectory.jsonl");
    const CameraPath got = load_trajectory_jsonl(d3 + "/trajectory.jsonl");
    REQUIRE(got.frames() == want.frames());
    for (int i = 0; i < got.frames(); ++i)
        CHECK((got.positions[static_cast<std::size_t>(i)] -
               want.positions[static_cast<std::size_t>(i)])
                  .norm() < 1e-6);

    // validate reports pass for the uniform s_curve.
    REQUIRE(run_cli("traj validate --traj " + d1 + "/trajectory.jsonl --out " + root) == 0);
    const nlohmann::json v = read_json(tmp.file("validate.json"));
    CHECK(v.at("pass") == true);
    CHECK(v.at("frames") == 41);
}

TEST_CASE("render is deterministic and crop tiles the sampled frames") {
    TempDir tmp("cli_render");
    const std::string root = tmp.path().string();
    const std::string t = root + "/t";
    const std::string r1 = root + "/r1";
    const std::string r2 = root + "/r2";
    const std::string c = root + "/c";
    REQUIRE(run_cli("traj make --kind forward --frames 3 --step 0.2 --out " + t) == 0);
    REQUIRE(run_cli("render --traj " + t + "/trajectory.jsonl --width 64 --height 32 --out " +
                    r1) == 0);
    REQUIRE(run_cli("render --traj " + t + "/trajectory.jsonl --width 64 --height 32 --out " +
                    r2) == 0);

    CHECK(fs::exists(r1 + "/scene.json")); // default scene is materialized
    for (int i = 0; i < 3; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "/frame_%05d.png", i);
        CHECK(slurp(r1 + name) == slurp(r2 + name));
    }

    REQUIRE(run_cli("crop --frames " + r1 + " --samples 2 --out " + c) == 0);
    // samples=2 keeps the first and last source frames, five views each.
    for (const char* frame : {"/frame_00000", "/frame_00002"})
        for (int v = 0; v < 5; ++v) {
            const std::string file = c + frame + "/view_" + std::to_string(v) + ".png";
            CHECK(fs::exists(file));
        }
    CHECK_FALSE(fs::exists(c + "/frame_00001"));
}

TEST_CASE("eval curve memoizes features under PANOLOOM_CACHE") {
    TempDir tmp("cli_cache");
    const std::string root = tmp.path().string();
    const std::string t = root + "/t";
    const std::string r = root + "/r";
    const std::string cache = root + "/cache";
    REQUIRE(run_cli("traj make --kind forward --frames 6 --step 0.3 --out " + t) == 0);
    REQUIRE(run_cli("render --traj " + t + "/trajectory.jsonl --width 32 --height 16 --out " +
                    r) == 0);

    setenv("PANOLOOM_CACHE", cache.c_str(), 1);
    const std::string e1 = root + "/e1";
    const std::string e2 = root + "/e2";
    REQUIRE(run_cli("eval curve --frames " + r + " --out " + e1) == 0);

    std::size_t fseq_files = 0;
    for (const auto& entry : fs::directory_iterator(cache + "/features"))
        fseq_files += entry.path().extension() == ".fseq";
    CHECK(fseq_files == 1);

    REQUIRE(run_cli("eval curve --frames " + r + " --out " + e2) == 0);
    unsetenv("PANOLOOM_CACHE");

    CHECK(slurp(e1 + "/report.csv") == slurp(e2 + "/report.csv"));
    CHECK(slurp(e1 + "/curve.svg") == slurp(e2 + "/curve.svg"));

    const nlohmann::json report = read_json(e1 + "/report.json");
    CHECK(report.at("frames") == 6);
    CHECK(report.at("provider") == "raw_pixel");
}

TEST_CASE("schedule and synth produce machine-readable plans") {
    TempDir tmp("cli_sched");
    const std::string root = tmp.path().string();
    REQUIRE(run_cli("schedule --s 8 --s-prime 1 --f 81 --overlap 1 --out " + root) == 0);
    const nlohmann::json plan = read_json(tmp.file("plan.json"));
    CHECK(plan.at("n") == 8);
    CHECK(plan.at("w") == 10);
    CHECK(plan.at("total_frames") == 641);
    CHECK(plan.at("segments").size() == 8);

    OccupancyGrid grid(12, 12, 0.1);
    grid.band = {1.3, 1.5};
    write_grid_pgm(grid, tmp.file("grid.pgm"));
    const std::string s = root + "/synth";
    REQUIRE(run_cli("traj synth --grid " + tmp.file("grid.pgm") +
                    " --target-coverage 0.6 --radius-m 0.3 --step-m 0.1 --seed 4 --out " +
                    s) == 0);
    const CameraPath path = load_trajectory_jsonl(s + "/trajectory.jsonl");
    REQUIRE(path.frames() >= 2);
    CHECK(validate_uniform(path, 1e-6).pass);

    const nlohmann::json report = read_json(s + "/synth_report.json");
    CHECK(report.at("covered_fraction").get<double>() >= 0.6);
    CHECK(report.at("incomplete") == false);
    CHECK(report.at("waypoints").size() >= 2);
}

TEST_CASE("curate slices pose files into a clean manifest") {
    TempDir tmp("cli_curate");
    std::vector<PoseRecord> poses;
    for (int k = 0; k < 200; ++k) {
        PoseRecord p;
        p.frame = k;
        p.position = {0.25 * k, 1.5, 0.0};
        poses.push_back(p);
    }
    save_poses_text(poses, tmp.file("walk.txt"));

    const std::string c = tmp.path().string() + "/curated";
    REQUIRE(run_cli("curate --poses " + tmp.file("walk.txt") +
                    " --frames 81 --stride 60 --out " + c) == 0);

    const std::vector<ClipManifest> clips = load_manifest(c + "/manifest.jsonl");
    REQUIRE(clips.size() == 2); // starts 0 and 60 fit in 200 frames
    CHECK(clips[0].id == "walk#0");
    CHECK(clips[1].id == "walk#60");
    CHECK(clips[0].start_frame == 0);
    CHECK(clips[1].start_frame == 60);
    for (const ClipManifest& clip : clips) {
        CHECK(clip.path.frames() == 81);
        CHECK(clip.flags.gravity_aligned);
        CHECK(clip.flags.uniform);
        CHECK(clip.flags.scale_ok);
        CHECK(clip.flow_scale.scale == doctest::Approx(1.0).epsilon(1e-9));
    }

    CHECK(slurp(c + "/rejections.csv") == "clip_id,reason,measured\n");
}

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

#ifndef PANOLOOM_TOOLS_COMMANDS_HPP
#define PANOLOOM_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace panoloom::cli {

struct RenderOpts {
    std::string scene;      // empty: procedural default scene from --seed
    std::string trajectory; // JSONL manifest
    int width = 960;
    int height = 480;
};

struct TrajMakeOpts {
    std::string kind = "forward";
    int frames = 81;
    double step = 0.1;
};

struct TrajDecomposeOpts {
    std::string trajectory;
    double reference_step = 0.0; // <= 0: use the path's own mean step
    double tolerance = 0.10;
};

struct TrajRecomposeOpts {
    std::string flow;
    std::string origin = "0,0,0";
};

struct TrajValidateOpts {
    std::string trajectory;
    double tolerance = 0.10;
};

struct TrajSynthOpts {
    std::string grid;
    double target_coverage = 0.5;
    double radius_m = 1.0;
    double step_m = 0.1;
};

struct ScheduleOpts {
    double s = 8.0;
    double s_prime = 1.0;
    int f = 81;
    int overlap = 1;
    int tc = 4;
};

struct EvalOpts {
    std::string kind;       // loop | psnr | ssim | frechet | curve
    std::string frames;     // PNG dir (loop/curve)
    std::string features;   // FSEQ file (loop/curve)
    std::string gen;        // PNG dir (psnr/ssim)
    std::string ref;        // PNG dir (psnr/ssim)
    std::string a;          // FSEQ (frechet)
    std::string b;          // FSEQ (frechet)
    std::string provider = "raw_pixel";
    int p = 5;
    std::string windows;    // "lo:hi,lo:hi"; empty: defaults
    double shrinkage = 0.0;
};

struct CropOpts {
    std::string frames;
    int samples = 100;
};

struct CurateOpts {
    std::vector<std::string> poses;
    int frames = 81;
    std::string policy = "uniform";
    int stride = 0;
    int count = 1;
    std::string band = "0.5:2.0";
    double tolerance = 0.10;
    double reference_step = 0.0; // <= 0: corpus median step
    std::string up;              // optional "x,y,z" hint
};

int cmd_render(const GlobalOpts& g, const RenderOpts& o);
int cmd_traj_make(const GlobalOpts& g, const TrajMakeOpts& o);
int cmd_traj_decompose(const GlobalOpts& g, const TrajDecomposeOpts& o);
int cmd_traj_recompose(const GlobalOpts& g, const TrajRecomposeOpts& o);
int cmd_traj_validate(const GlobalOpts& g, const TrajValidateOpts& o);
int cmd_traj_synth(const GlobalOpts& g, const TrajSynthOpts& o);
int cmd_schedule(const GlobalOpts& g, const ScheduleOpts& o);
int cmd_eval(const GlobalOpts& g, const EvalOpts& o);
int cmd_crop(const GlobalOpts& g, const CropOpts& o);
int cmd_curate(const GlobalOpts& g, const CurateOpts& o);

} // namespace panoloom::cli

#endif

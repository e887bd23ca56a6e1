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

#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include <panoloom/errors.hpp>

#include "commands.hpp"

using namespace panoloom;
using namespace panoloom::cli;

// Exit codes: 0 ok, 2 usage, 3 validation, 4 routing, 5 numeric; 1 for
// anything else (I/O and the like), so pipelines can branch on the cause.
int main(int argc, char** argv) {
    CLI::App app{"panoloom: panoramic trajectory, scheduling and evaluation toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed shared by all stochastic choices")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (results are thread-count invariant)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", g.out, "output directory (created if missing)")
        ->capture_default_str();

    RenderOpts render_o;
    auto* render = app.add_subcommand("render", "render a trajectory through a scene to ERP PNGs");
    render->add_option("--scene", render_o.scene, "scene JSON (omit for the seeded default scene)");
    render->add_option("--traj", render_o.trajectory, "trajectory manifest JSONL")->required();
    render->add_option("--width", render_o.width, "ERP width")->capture_default_str();
    render->add_option("--height", render_o.height, "ERP height")->capture_default_str();

    auto* traj = app.add_subcommand("traj", "trajectory construction and analysis");
    traj->require_subcommand(1);

    TrajMakeOpts make_o;
    auto* traj_make = traj->add_subcommand("make", "emit a standard trajectory");
    traj_make
        ->add_option("--kind", make_o.kind,
                     "forward | backward | left | right | s_curve | loop")
        ->capture_default_str();
    traj_make->add_option("--frames", make_o.frames, "frame count")->capture_default_str();
    traj_make->add_option("--step", make_o.step, "per-frame step in meters")
        ->capture_default_str();

    TrajDecomposeOpts dec_o;
    auto* traj_dec = traj->add_subcommand("decompose", "trajectory to flow directions + scale");
    traj_dec->add_option("--traj", dec_o.trajectory, "trajectory manifest JSONL")->required();
    traj_dec->add_option("--reference-step", dec_o.reference_step,
                         "normal-playback step (<= 0: the path's own mean step)")
        ->capture_default_str();
    traj_dec->add_option("--tolerance", dec_o.tolerance, "uniform-velocity tolerance")
        ->capture_default_str();

    TrajRecomposeOpts rec_o;
    auto* traj_rec = traj->add_subcommand("recompose", "flow + scale back to a trajectory");
    traj_rec->add_option("--flow", rec_o.flow, "flow/scale JSON")->required();
    traj_rec->add_option("--origin", rec_o.origin, "start position \"x,y,z\"")
        ->capture_default_str();

    TrajValidateOpts val_o;
    auto* traj_val = traj->add_subcommand("validate", "uniform-velocity report");
    traj_val->add_option("--traj", val_o.trajectory, "trajectory manifest JSONL")->required();
    traj_val->add_option("--tolerance", val_o.tolerance, "relative step tolerance")
        ->capture_default_str();

    TrajSynthOpts synth_o;
    auto* traj_synth = traj->add_subcommand("synth", "plan a wandering path over an occupancy grid");
    traj_synth->add_option("--grid", synth_o.grid, "occupancy PGM")->required();
    traj_synth->add_option("--target-coverage", synth_o.target_coverage,
                           "fraction of free space to cover")
        ->capture_default_str();
    traj_synth->add_option("--radius-m", synth_o.radius_m, "coverage radius in meters")
        ->capture_default_str();
    traj_synth->add_option("--step-m", synth_o.step_m, "resampled step length in meters")
        ->capture_default_str();

    ScheduleOpts sched_o;
    auto* sched = app.add_subcommand("schedule", "refine-stage segment plan and masks");
    sched->add_option("--s", sched_o.s, "preview scale")->capture_default_str();
    sched->add_option("--s-prime", sched_o.s_prime, "target scale")->capture_default_str();
    sched->add_option("--f", sched_o.f, "frames per clip")->capture_default_str();
    sched->add_option("--overlap", sched_o.overlap, "frames shared between segments")
        ->capture_default_str();
    sched->add_option("--tc", sched_o.tc, "temporal compression of the latent grid")
        ->capture_default_str();

    EvalOpts eval_o;
    auto* eval = app.add_subcommand("eval", "evaluation metrics and reports");
    eval->require_subcommand(1);
    const std::map<std::string, std::string> eval_desc{
        {"loop", "loop-consistency score over a frame sequence"},
        {"curve", "per-frame similarity curve against frame 0"},
        {"psnr", "windowed PSNR of generated frames against a reference"},
        {"ssim", "per-frame SSIM of generated frames against a reference"},
        {"frechet", "Frechet distance between two feature files"}};
    for (const char* kind : {"loop", "curve", "psnr", "ssim", "frechet"}) {
        auto* sub = eval->add_subcommand(kind, eval_desc.at(kind));
        if (std::string(kind) == "loop" || std::string(kind) == "curve") {
            sub->add_option("--frames", eval_o.frames, "PNG frame directory");
            sub->add_option("--features", eval_o.features, "precomputed FSEQ feature file");
            sub->add_option("--provider", eval_o.provider,
                            "raw_pixel | dct_lowfreq | external")
                ->capture_default_str();
        }
        if (std::string(kind) == "loop")
            sub->add_option("--p", eval_o.p, "buffer length P")->capture_default_str();
        if (std::string(kind) == "psnr" || std::string(kind) == "ssim") {
            sub->add_option("--gen", eval_o.gen, "generated PNG directory")->required();
            sub->add_option("--ref", eval_o.ref, "reference PNG directory")->required();
        }
        if (std::string(kind) == "psnr")
            sub->add_option("--windows", eval_o.windows,
                            "inclusive frame windows \"lo:hi,lo:hi\" (default 20:25,50:55,70:75)");
        if (std::string(kind) == "frechet") {
            sub->add_option("--a", eval_o.a, "first FSEQ feature file")->required();
            sub->add_option("--b", eval_o.b, "second FSEQ feature file")->required();
            sub->add_option("--shrinkage", eval_o.shrinkage,
                            "covariance diagonal loading (small-sample stabilizer)")
                ->capture_default_str();
        }
    }

    CropOpts crop_o;
    auto* crop = app.add_subcommand("crop", "five perspective views per sampled frame");
    crop->add_option("--frames", crop_o.frames, "ERP PNG directory")->required();
    crop->add_option("--samples", crop_o.samples, "frames to sample (first and last included)")
        ->capture_default_str();

    CurateOpts cur_o;
    auto* curate = app.add_subcommand("curate", "pose files to a curated clip manifest");
    curate->add_option("--poses", cur_o.poses, "pose files (text or .json), one per source clip")
        ->required()
        ->expected(-1);
    curate->add_option("--frames", cur_o.frames, "frames per emitted clip")
        ->capture_default_str();
    curate->add_option("--policy", cur_o.policy, "uniform | random window placement")
        ->capture_default_str();
    curate->add_option("--stride", cur_o.stride, "uniform stride (<= 0: clip length)")
        ->capture_default_str();
    curate->add_option("--count", cur_o.count, "random windows per source clip")
        ->capture_default_str();
    curate->add_option("--band", cur_o.band, "scale band \"lo:hi\" relative to corpus median")
        ->capture_default_str();
    curate->add_option("--tolerance", cur_o.tolerance, "uniform-velocity tolerance")
        ->capture_default_str();
    curate->add_option("--reference-step", cur_o.reference_step,
                       "normal-playback step (<= 0: corpus median)")
        ->capture_default_str();
    curate->add_option("--up", cur_o.up, "gravity up hint \"x,y,z\" overriding the estimate");

    // Let --seed/--threads/--out appear after the subcommand as well.
    const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
        node->fallthrough(true);
        for (CLI::App* sub : node->get_subcommands({})) enable_fallthrough(sub);
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ensure_out_dir(g.out);
        if (app.got_subcommand(render)) return cmd_render(g, render_o);
        if (app.got_subcommand(traj)) {
            if (traj->got_subcommand(traj_make)) return cmd_traj_make(g, make_o);
            if (traj->got_subcommand(traj_dec)) return cmd_traj_decompose(g, dec_o);
            if (traj->got_subcommand(traj_rec)) return cmd_traj_recompose(g, rec_o);
            if (traj->got_subcommand(traj_val)) return cmd_traj_validate(g, val_o);
            if (traj->got_subcommand(traj_synth)) return cmd_traj_synth(g, synth_o);
        }
        if (app.got_subcommand(sched)) return cmd_schedule(g, sched_o);
        if (app.got_subcommand(eval)) {
            eval_o.kind = eval->get_subcommands().front()->get_name();
            return cmd_eval(g, eval_o);
        }
        if (app.got_subcommand(crop)) return cmd_crop(g, crop_o);
        if (app.got_subcommand(curate)) return cmd_curate(g, cur_o);
        std::cerr << "panoloom: no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "panoloom: usage: " << e.what() << "\n";
        return 2;
    } catch (const RoutingError& e) {
        std::cerr << "panoloom: routing: " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "panoloom: numeric: " << e.what() << "\n";
        return 5;
    } catch (const ValidationError& e) {
        std::cerr << "panoloom: validation: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "panoloom: parse: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "panoloom: validation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "panoloom: error: " << e.what() << "\n";
        return 1;
    }
}

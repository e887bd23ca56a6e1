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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <panoloom/dataset_pipeline.hpp>
#include <panoloom/erp_geometry.hpp>
#include <panoloom/errors.hpp>
#include <panoloom/image_io.hpp>
#include <panoloom/metrics.hpp>
#include <panoloom/reports.hpp>
#include <panoloom/scene_oracle.hpp>
#include <panoloom/segment_scheduler.hpp>
#include <panoloom/trajectory.hpp>
#include <panoloom/trajectory_synthesis.hpp>

namespace fs = std::filesystem;

namespace panoloom::cli {

namespace {

std::string out_path(const GlobalOpts& g, const std::string& name) {
    return (fs::path(g.out) / name).string();
}

Vec3 parse_vec3(const std::string& text, const std::string& flag) {
    Vec3 v;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &v.x, &v.y, &v.z, &extra) != 3)
        throw UsageError(flag + " wants \"x,y,z\", got \"" + text + "\"");
    return v;
}

std::pair<double, double> parse_pair(const std::string& text, char sep, const std::string& flag) {
    double lo = 0.0, hi = 0.0;
    char extra = 0;
    const std::string pattern = std::string("%lf") + sep + "%lf%c";
    if (std::sscanf(text.c_str(), pattern.c_str(), &lo, &hi, &extra) != 2)
        throw UsageError(flag + " wants \"lo" + sep + std::string("hi\", got \"") + text + "\"");
    return {lo, hi};
}

std::vector<std::pair<int, int>> parse_windows(const std::string& text) {
    std::vector<std::pair<int, int>> windows;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        int lo = 0, hi = 0;
        char extra = 0;
        if (std::sscanf(item.c_str(), "%d:%d%c", &lo, &hi, &extra) != 2)
            throw UsageError("--windows wants \"lo:hi[,lo:hi...]\", got \"" + text + "\"");
        windows.emplace_back(lo, hi);
    }
    if (windows.empty()) throw UsageError("--windows is empty");
    return windows;
}

std::vector<std::string> list_pngs(const std::string& dir) {
    if (!fs::is_directory(dir)) throw ValidationError("'" + dir + "' is not a directory");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ValidationError("no .png frames in '" + dir + "'");
    return files;
}

std::vector<Image> load_frames(const std::string& dir) {
    std::vector<Image> frames;
    for (const std::string& file : list_pngs(dir)) frames.push_back(read_png(file));
    return frames;
}

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Features for a frame directory, memoized under PANOLOOM_CACHE when set.
// The key hashes the provider plus every frame's name and bytes, so any
// content change misses cleanly.
FeatureSequence compute_features(const std::vector<std::string>& files,
                                 const std::string& provider) {
    std::vector<Image> frames;
    frames.reserve(files.size());
    for (const std::string& file : files) frames.push_back(read_png(file));
    return provider == "dct_lowfreq" ? dct_lowfreq_features(frames)
                                     : raw_pixel_features(frames);
}

FeatureSequence features_for_dir(const std::string& dir, const std::string& provider) {
    const auto files = list_pngs(dir);

    const auto root = cache_root();
    if (!root) return compute_features(files, provider);

    std::vector<std::string> parts{provider};
    for (const std::string& file : files) {
        parts.push_back(fs::path(file).filename().string());
        parts.push_back(slurp(file));
    }
    const fs::path cache_dir = fs::path(*root) / "features";
    fs::create_directories(cache_dir);
    const std::string cached_path = (cache_dir / (cache_key(parts) + ".fseq")).string();
    if (!fs::exists(cached_path)) write_fseq(compute_features(files, provider), cached_path);

    // Serve misses through the file too: the f32 round trip then yields the
    // same bytes downstream whether the cache was cold or warm. The rows keep
    // the label of the provider that produced them.
    const FeatureSequence cached = read_fseq(cached_path);
    if (cached.rows() != files.size())
        throw ValidationError("feature cache '" + cached_path +
                              "' does not match the frame directory");
    return FeatureSequence(cached.data(), cached.rows(), cached.dim(), provider);
}

FeatureSequence eval_features(const EvalOpts& o) {
    const bool have_frames = !o.frames.empty();
    const bool have_features = !o.features.empty();
    if (have_frames == have_features)
        throw UsageError("give exactly one of --frames or --features");
    if (have_features) {
        if (o.provider != "external" && o.provider != "raw_pixel")
            throw UsageError("--features implies --provider external");
        return read_fseq(o.features);
    }
    if (o.provider != "raw_pixel" && o.provider != "dct_lowfreq")
        throw UsageError("--provider must be raw_pixel, dct_lowfreq or external");
    return features_for_dir(o.frames, o.provider);
}

} // namespace

int cmd_render(const GlobalOpts& g, const RenderOpts& o) {
    if (o.width != 2 * o.height)
        throw UsageError("ERP dims must satisfy width == 2 * height, got " +
                         std::to_string(o.width) + "x" + std::to_string(o.height));

    const CameraPath path = load_trajectory_jsonl(o.trajectory);
    ProceduralScene scene;
    if (o.scene.empty()) {
        scene = make_default_scene(g.seed);
        save_scene_json(scene, out_path(g, "scene.json"));
    } else {
        scene = load_scene_json(o.scene);
    }

    char name[32];
    for (int i = 0; i < path.frames(); ++i) {
        const ErpFrame frame = render_erp(scene, path.positions[static_cast<std::size_t>(i)],
                                          o.width, o.height, g.threads);
        std::snprintf(name, sizeof(name), "frame_%05d.png", i);
        write_png(frame, out_path(g, name));
    }

    write_run_json(g, "render",
                   {{"scene", o.scene.empty() ? "<default>" : o.scene},
                    {"trajectory", o.trajectory},
                    {"width", o.width},
                    {"height", o.height},
                    {"frames", path.frames()}});
    std::cout << "rendered " << path.frames() << " frames at " << o.width << "x" << o.height
              << " into " << g.out << "\n";
    return 0;
}

int cmd_traj_make(const GlobalOpts& g, const TrajMakeOpts& o) {
    const TrajectoryKind kind = trajectory_kind_from_string(o.kind);
    const CameraPath path = standard_trajectory(kind, o.frames, o.step);
    save_trajectory_jsonl(path, out_path(g, "trajectory.jsonl"));
    write_run_json(g, "traj make",
                   {{"kind", o.kind}, {"frames", o.frames}, {"step", o.step}});
    std::cout << "wrote " << path.frames() << "-frame " << o.kind << " trajectory\n";
    return 0;
}

int cmd_traj_decompose(const GlobalOpts& g, const TrajDecomposeOpts& o) {
    const CameraPath path = load_trajectory_jsonl(o.trajectory);
    double reference = o.reference_step;
    if (reference <= 0.0) {
        const UniformVelocityReport report = validate_uniform(path, o.tolerance);
        reference = report.mean_step;
    }
    const FlowScale flow = decompose(path, reference, o.tolerance);
    save_flow_scale_json(flow, out_path(g, "flow_scale.json"));
    write_run_json(g, "traj decompose",
                   {{"trajectory", o.trajectory},
                    {"reference_step", reference},
                    {"tolerance", o.tolerance}});
    std::cout << "scale " << flow.scale << " over " << flow.flow.size() << " steps\n";
    return 0;
}

int cmd_traj_recompose(const GlobalOpts& g, const TrajRecomposeOpts& o) {
    const FlowScale flow = load_flow_scale_json(o.flow);
    const CameraPath path = recompose(flow, parse_vec3(o.origin, "--origin"));
    save_trajectory_jsonl(path, out_path(g, "trajectory.jsonl"));
    write_run_json(g, "traj recompose", {{"flow", o.flow}, {"origin", o.origin}});
    std::cout << "recomposed " << path.frames() << " frames\n";
    return 0;
}

int cmd_traj_validate(const GlobalOpts& g, const TrajValidateOpts& o) {
    const CameraPath path = load_trajectory_jsonl(o.trajectory);
    const UniformVelocityReport report = validate_uniform(path, o.tolerance);
    reports::write_json({{"pass", report.pass},
                         {"max_rel_deviation", report.max_rel_deviation},
                         {"mean_step", report.mean_step},
                         {"tolerance", report.tolerance},
                         {"frames", path.frames()}},
                        out_path(g, "validate.json"));
    write_run_json(g, "traj validate",
                   {{"trajectory", o.trajectory}, {"tolerance", o.tolerance}});
    std::cout << (report.pass ? "uniform" : "NOT uniform") << " (max rel deviation "
              << report.max_rel_deviation << ", tolerance " << report.tolerance << ")\n";
    return 0;
}

int cmd_traj_synth(const GlobalOpts& g, const TrajSynthOpts& o) {
    const OccupancyGrid grid = read_grid_pgm(o.grid);
    const WaypointPlan plan = plan_waypoints(grid, o.target_coverage, o.radius_m, g.seed);
    const CameraPath path = route_and_resample(grid, plan, o.step_m);
    save_trajectory_jsonl(path, out_path(g, "trajectory.jsonl"));

    nlohmann::json waypoints = nlohmann::json::array();
    for (const GridCell& c : plan.waypoints) waypoints.push_back({c.x, c.z});
    reports::write_json({{"covered_fraction", plan.covered_fraction},
                         {"coverage_radius_cells", plan.coverage_radius_cells},
                         {"incomplete", plan.incomplete},
                         {"waypoints", waypoints},
                         {"frames", path.frames()}},
                        out_path(g, "synth_report.json"));
    write_run_json(g, "traj synth",
                   {{"grid", o.grid},
                    {"target_coverage", o.target_coverage},
                    {"radius_m", o.radius_m},
                    {"step_m", o.step_m}});
    std::cout << plan.waypoints.size() << " waypoints, coverage " << plan.covered_fraction
              << ", " << path.frames() << " frames\n";
    return 0;
}

int cmd_schedule(const GlobalOpts& g, const ScheduleOpts& o) {
    const SegmentPlan plan = plan_segments(o.s, o.s_prime, o.f, o.overlap);
    save_plan_json(plan, o.tc, out_path(g, "plan.json"));
    write_run_json(g, "schedule",
                   {{"s", o.s},
                    {"s_prime", o.s_prime},
                    {"f", o.f},
                    {"overlap", o.overlap},
                    {"temporal_compression", o.tc}});
    std::cout << "n=" << plan.n << " w=" << plan.w << " total=" << plan.total_frames()
              << " frames\n";
    return 0;
}

namespace {

int eval_loop(const GlobalOpts& g, const EvalOpts& o) {
    const FeatureSequence feats = eval_features(o);
    const LoopScores scores = loop_consistency(feats, o.p);
    reports::write_json({{"s1", scores.s1},
                         {"s2", scores.s2},
                         {"c_loop", scores.c_loop},
                         {"p", scores.p},
                         {"degenerate", scores.degenerate},
                         {"provider", feats.provider_id()},
                         {"frames", feats.rows()}},
                        out_path(g, "report.json"));
    char c_loop[48], s1[48], s2[48];
    std::snprintf(c_loop, sizeof(c_loop), "%.12g", scores.c_loop);
    std::snprintf(s1, sizeof(s1), "%.12g", scores.s1);
    std::snprintf(s2, sizeof(s2), "%.12g", scores.s2);
    reports::write_csv({"s1", "s2", "c_loop", "p", "degenerate"},
                       {{s1, s2, c_loop, std::to_string(scores.p),
                         scores.degenerate ? "true" : "false"}},
                       out_path(g, "report.csv"));
    std::cout << "C_loop " << scores.c_loop << " (S1 " << scores.s1 << ", S2 " << scores.s2
              << (scores.degenerate ? ", degenerate)\n" : ")\n");
    return 0;
}

int eval_curve(const GlobalOpts& g, const EvalOpts& o) {
    const FeatureSequence feats = eval_features(o);
    const std::vector<double> curve = similarity_curve(feats);

    std::vector<std::vector<std::string>> rows;
    char val[48];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(val, sizeof(val), "%.12g", curve[i]);
        rows.push_back({std::to_string(i), val});
    }
    reports::write_csv({"frame", "similarity"}, rows, out_path(g, "report.csv"));
    reports::write_curve_svg({{feats.provider_id(), curve}}, "Similarity to first frame",
                             "frame", "cosine similarity", out_path(g, "curve.svg"));
    reports::write_json({{"values", curve},
                         {"provider", feats.provider_id()},
                         {"frames", feats.rows()}},
                        out_path(g, "report.json"));
    std::cout << "curve over " << curve.size() << " frames, final " << curve.back() << "\n";
    return 0;
}

int eval_psnr(const GlobalOpts& g, const EvalOpts& o) {
    if (o.gen.empty() || o.ref.empty()) throw UsageError("psnr wants --gen and --ref");
    const std::vector<Image> gen = load_frames(o.gen);
    const std::vector<Image> ref = load_frames(o.ref);
    if (gen.size() != ref.size())
        throw ValidationError("psnr: --gen has " + std::to_string(gen.size()) +
                              " frames, --ref has " + std::to_string(ref.size()));
    const auto windows = o.windows.empty() ? default_psnr_windows() : parse_windows(o.windows);
    const std::vector<double> values = psnr_windows(gen, ref, windows);

    nlohmann::json jwindows = nlohmann::json::array();
    std::vector<std::vector<std::string>> rows;
    char val[48];
    for (std::size_t i = 0; i < windows.size(); ++i) {
        jwindows.push_back({{"lo", windows[i].first},
                            {"hi", windows[i].second},
                            {"psnr_db", values[i]}});
        std::snprintf(val, sizeof(val), "%.12g", values[i]);
        rows.push_back(
            {std::to_string(windows[i].first), std::to_string(windows[i].second), val});
    }
    reports::write_json({{"windows", jwindows}, {"frames", gen.size()}},
                        out_path(g, "report.json"));
    reports::write_csv({"lo", "hi", "psnr_db"}, rows, out_path(g, "report.csv"));
    std::cout << windows.size() << " windows, first " << values.front() << " dB\n";
    return 0;
}

int eval_ssim(const GlobalOpts& g, const EvalOpts& o) {
    if (o.gen.empty() || o.ref.empty()) throw UsageError("ssim wants --gen and --ref");
    const std::vector<Image> gen = load_frames(o.gen);
    const std::vector<Image> ref = load_frames(o.ref);
    if (gen.size() != ref.size())
        throw ValidationError("ssim: --gen has " + std::to_string(gen.size()) +
                              " frames, --ref has " + std::to_string(ref.size()));

    std::vector<double> values(gen.size());
    std::vector<std::vector<std::string>> rows;
    char val[48];
    for (std::size_t i = 0; i < gen.size(); ++i) {
        values[i] = ssim(gen[i], ref[i]);
        std::snprintf(val, sizeof(val), "%.12g", values[i]);
        rows.push_back({std::to_string(i), val});
    }
    const double mean = pairwise_sum(values) / static_cast<double>(values.size());
    reports::write_json({{"mean", mean}, {"per_frame", values}, {"frames", gen.size()}},
                        out_path(g, "report.json"));
    reports::write_csv({"frame", "ssim"}, rows, out_path(g, "report.csv"));
    std::cout << "mean SSIM " << mean << " over " << gen.size() << " frames\n";
    return 0;
}

int eval_frechet(const GlobalOpts& g, const EvalOpts& o) {
    if (o.a.empty() || o.b.empty()) throw UsageError("frechet wants --a and --b");
    const FeatureSequence fa = read_fseq(o.a);
    const FeatureSequence fb = read_fseq(o.b);
    FrechetOptions opts;
    opts.shrinkage = o.shrinkage;
    const double dist = frechet_distance(fa, fb, opts);
    reports::write_json({{"distance", dist},
                         {"rows_a", fa.rows()},
                         {"rows_b", fb.rows()},
                         {"dim", fa.dim()},
                         {"shrinkage", o.shrinkage}},
                        out_path(g, "report.json"));
    char val[48];
    std::snprintf(val, sizeof(val), "%.12g", dist);
    reports::write_csv({"distance", "rows_a", "rows_b", "dim"},
                       {{val, std::to_string(fa.rows()), std::to_string(fb.rows()),
                         std::to_string(fa.dim())}},
                       out_path(g, "report.csv"));
    std::cout << "frechet distance " << dist << "\n";
    return 0;
}

} // namespace

int cmd_eval(const GlobalOpts& g, const EvalOpts& o) {
    int rc;
    if (o.kind == "loop")
        rc = eval_loop(g, o);
    else if (o.kind == "curve")
        rc = eval_curve(g, o);
    else if (o.kind == "psnr")
        rc = eval_psnr(g, o);
    else if (o.kind == "ssim")
        rc = eval_ssim(g, o);
    else if (o.kind == "frechet")
        rc = eval_frechet(g, o);
    else
        throw UsageError("unknown eval kind '" + o.kind + "'");

    write_run_json(g, "eval " + o.kind,
                   {{"frames", o.frames},
                    {"features", o.features},
                    {"gen", o.gen},
                    {"ref", o.ref},
                    {"a", o.a},
                    {"b", o.b},
                    {"provider", o.provider},
                    {"p", o.p},
                    {"windows", o.windows},
                    {"shrinkage", o.shrinkage}});
    return rc;
}

int cmd_crop(const GlobalOpts& g, const CropOpts& o) {
    const std::vector<std::string> files = list_pngs(o.frames);
    const int total = static_cast<int>(files.size());
    if (o.samples < 1) throw UsageError("--samples must be >= 1");
    if (total < o.samples)
        throw ValidationError("crop: need at least " + std::to_string(o.samples) +
                              " frames, found " + std::to_string(total));

    // Linear spacing over [0, total-1], first and last always included.
    std::vector<int> indices;
    if (o.samples == 1) {
        indices.push_back(0);
    } else {
        for (int k = 0; k < o.samples; ++k)
            indices.push_back(static_cast<int>(std::llround(
                static_cast<double>(k) * (total - 1) / (o.samples - 1))));
    }

    char dir_name[32];
    int crops = 0;
    for (int idx : indices) {
        const ErpFrame frame = read_png(files[static_cast<std::size_t>(idx)]);
        if (frame.width != 2 * frame.height)
            throw ValidationError("crop: frame '" + files[static_cast<std::size_t>(idx)] +
                                  "' is not 2:1 equirectangular");
        const std::array<Image, 5> views = five_crop_set(frame);
        std::snprintf(dir_name, sizeof(dir_name), "frame_%05d", idx);
        const fs::path frame_dir = fs::path(g.out) / dir_name;
        fs::create_directories(frame_dir);
        for (int v = 0; v < 5; ++v) {
            write_png(views[static_cast<std::size_t>(v)],
                      (frame_dir / ("view_" + std::to_string(v) + ".png")).string());
            ++crops;
        }
    }

    write_run_json(g, "crop",
                   {{"frames", o.frames},
                    {"samples", o.samples},
                    {"indices", indices},
                    {"crops", crops}});
    std::cout << crops << " crops from " << indices.size() << " sampled frames\n";
    return 0;
}

int cmd_curate(const GlobalOpts& g, const CurateOpts& o) {
    const auto band_pair = parse_pair(o.band, ':', "--band");
    ScaleBand band{band_pair.first, band_pair.second};

    SliceOptions slice_opts;
    if (o.policy == "uniform")
        slice_opts.policy = SlicePolicy::uniform;
    else if (o.policy == "random")
        slice_opts.policy = SlicePolicy::random;
    else
        throw UsageError("--policy must be uniform or random");
    slice_opts.stride = o.stride;
    slice_opts.count = o.count;

    Vec3 up_hint;
    const bool have_hint = !o.up.empty();
    if (have_hint) up_hint = parse_vec3(o.up, "--up");

    struct Slice {
        std::string id;
        int start = 0;
        CameraPath path;
    };
    std::vector<Slice> slices;
    std::vector<Rejection> rejections;

    for (std::size_t file_idx = 0; file_idx < o.poses.size(); ++file_idx) {
        const std::string& file = o.poses[file_idx];
        std::vector<PoseRecord> poses = fs::path(file).extension() == ".json"
                                            ? load_poses_json(file)
                                            : load_poses_text(file);
        poses = gravity_align(poses, have_hint ? &up_hint : nullptr);

        CameraPath path;
        path.positions.reserve(poses.size());
        for (const PoseRecord& p : poses) path.positions.push_back(p.position);

        slice_opts.seed = g.seed + file_idx; // distinct random draws per clip
        const std::string stem = fs::path(file).stem().string();
        for (int start : slice_starts(path.frames(), o.frames, slice_opts)) {
            Slice s;
            s.id = stem + "#" + std::to_string(start);
            s.start = start;
            s.path.positions.assign(path.positions.begin() + start,
                                    path.positions.begin() + start + o.frames);
            slices.push_back(std::move(s));
        }
    }

    // Uniform-velocity screen before any scale statistics.
    std::vector<Slice> uniform_slices;
    for (Slice& s : slices) {
        try {
            const UniformVelocityReport report = validate_uniform(s.path, o.tolerance);
            if (!report.pass) {
                rejections.push_back({s.id, "non_uniform", report.max_rel_deviation});
                continue;
            }
        } catch (const DegenerateStepError&) {
            rejections.push_back({s.id, "degenerate_step", 0.0});
            continue;
        }
        uniform_slices.push_back(std::move(s));
    }

    std::vector<ClipManifest> manifest;
    if (!uniform_slices.empty()) {
        std::vector<CameraPath> paths;
        paths.reserve(uniform_slices.size());
        for (const Slice& s : uniform_slices) paths.push_back(s.path);
        const ScalePartition part = filter_scale(paths, band);
        const double reference =
            o.reference_step > 0.0 ? o.reference_step : part.corpus_median;

        for (std::size_t idx : part.rejected)
            rejections.push_back(
                {uniform_slices[idx].id, "scale_out_of_band", part.median_steps[idx]});
        for (std::size_t idx : part.kept) {
            ClipManifest clip;
            clip.id = uniform_slices[idx].id;
            clip.start_frame = uniform_slices[idx].start;
            clip.path = uniform_slices[idx].path;
            clip.flow_scale = decompose(clip.path, reference, o.tolerance);
            clip.flags = {true, true, true};
            manifest.push_back(std::move(clip));
        }
    }

    emit_manifest(manifest, out_path(g, "manifest.jsonl"));
    write_rejection_csv(rejections, out_path(g, "rejections.csv"));
    write_run_json(g, "curate",
                   {{"poses", o.poses},
                    {"frames", o.frames},
                    {"policy", o.policy},
                    {"stride", o.stride},
                    {"count", o.count},
                    {"band", o.band},
                    {"tolerance", o.tolerance},
                    {"reference_step", o.reference_step},
                    {"up", o.up},
                    {"slices", slices.size()},
                    {"kept", manifest.size()},
                    {"rejected", rejections.size()}});
    std::cout << manifest.size() << " clips kept, " << rejections.size() << " rejected\n";
    return 0;
}

} // namespace panoloom::cli

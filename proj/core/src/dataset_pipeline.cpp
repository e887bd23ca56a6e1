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

#include "panoloom/dataset_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "panoloom/errors.hpp"
#include "panoloom/rng.hpp"

namespace panoloom {

namespace {

void check_rotation(const std::array<double, 9>& r, int frame) {
    // R^T R == I, elementwise within 1e-6.
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r[static_cast<std::size_t>(3 * k + i)] *
                                                r[static_cast<std::size_t>(3 * k + j)];
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(dot - want) > 1e-6)
                throw ValidationError("pose frame " + std::to_string(frame) +
                                      ": rotation is not orthonormal within 1e-6");
        }
    }
}

std::array<double, 9> matmul(const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a[static_cast<std::size_t>(3 * i + k)] * b[static_cast<std::size_t>(3 * k + j)];
            out[static_cast<std::size_t>(3 * i + j)] = s;
        }
    return out;
}

Vec3 rotate_vec(const std::array<double, 9>& r, const Vec3& v) {
    return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
            r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::vector<PoseRecord> load_poses_text(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open '" + file + "' for reading");

    std::vector<PoseRecord> poses;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream row(line);
        PoseRecord pose;
        row >> pose.frame >> pose.position.x >> pose.position.y >> pose.position.z;
        for (double& r : pose.rotation) row >> r;
        if (!row)
            throw ParseError("pose file '" + file + "' line " + std::to_string(line_no) +
                                 ": expected `frame tx ty tz r00..r22`",
                             0);
        check_rotation(pose.rotation, pose.frame);
        poses.push_back(pose);
    }
    return poses;
}

std::vector<PoseRecord> load_poses_json(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("pose file '" + file + "': " + e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    if (!doc.is_array()) throw ParseError("pose file '" + file + "': expected a JSON array", 0);

    std::vector<PoseRecord> poses;
    for (const auto& j : doc) {
        PoseRecord pose;
        pose.frame = j.at("frame").get<int>();
        const auto& p = j.at("position");
        if (!p.is_array() || p.size() != 3)
            throw ParseError("pose file '" + file + "': position must be [x, y, z]", 0);
        pose.position = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
        const auto& r = j.at("rotation");
        if (!r.is_array() || r.size() != 3)
            throw ParseError("pose file '" + file + "': rotation must be 3x3", 0);
        for (int i = 0; i < 3; ++i) {
            if (!r[i].is_array() || r[i].size() != 3)
                throw ParseError("pose file '" + file + "': rotation must be 3x3", 0);
            for (int k = 0; k < 3; ++k)
                pose.rotation[static_cast<std::size_t>(3 * i + k)] = r[i][k].get<double>();
        }
        check_rotation(pose.rotation, pose.frame);
        poses.push_back(pose);
    }
    return poses;
}

void save_poses_text(const std::vector<PoseRecord>& poses, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    char buf[512];
    for (const PoseRecord& p : poses) {
        std::snprintf(buf, sizeof(buf),
                      "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g "
                      "%.17g\n",
                      p.frame, p.position.x, p.position.y, p.position.z, p.rotation[0],
                      p.rotation[1], p.rotation[2], p.rotation[3], p.rotation[4], p.rotation[5],
                      p.rotation[6], p.rotation[7], p.rotation[8]);
        out << buf;
    }
    if (!out) throw Error("write failed for '" + file + "'");
}

std::vector<PoseRecord> gravity_align(const std::vector<PoseRecord>& poses, const Vec3* up_hint) {
    if (poses.size() < 2) throw DomainError("gravity_align: need at least 2 poses");

    Vec3 mean_up;
    for (const PoseRecord& p : poses) {
        // Camera-local +y expressed in world coordinates: column 1 of R.
        mean_up += Vec3{p.rotation[1], p.rotation[4], p.rotation[7]};
    }
    mean_up = mean_up / static_cast<double>(poses.size());

    Vec3 up;
    if (up_hint != nullptr) {
        if (up_hint->norm() < 1e-12)
            throw DomainError("gravity_align: up hint is a zero vector");
        up = up_hint->normalized();
    } else {
        if (mean_up.norm() < 1e-9)
            throw AlignmentError(
                "gravity_align: camera-up directions cancel out (mean norm < 1e-9); "
                "pass an explicit up hint");
        up = mean_up.normalized();
    }

    // Minimal rotation G with G * up == +y (Rodrigues); identity/flip handled
    // exactly so already-aligned inputs stay bit-stable.
    const Vec3 ey{0.0, 1.0, 0.0};
    const Vec3 axis = up.cross(ey);
    const double s = axis.norm();
    const double c = up.dot(ey);

    std::array<double, 9> g{1, 0, 0, 0, 1, 0, 0, 0, 1};
    if (s < 1e-15) {
        if (c < 0.0) g = {1, 0, 0, 0, -1, 0, 0, 0, -1}; // upside down: flip about x
    } else {
        const Vec3 k = axis / s;
        const std::array<double, 9> kx{0, -k.z, k.y, k.z, 0, -k.x, -k.y, k.x, 0};
        const std::array<double, 9> kx2 = matmul(kx, kx);
        for (int i = 0; i < 9; ++i)
            g[static_cast<std::size_t>(i)] = (i % 4 == 0 ? 1.0 : 0.0) +
                                             s * kx[static_cast<std::size_t>(i)] +
                                             (1.0 - c) * kx2[static_cast<std::size_t>(i)];
    }

    std::vector<PoseRecord> out;
    out.reserve(poses.size());
    for (const PoseRecord& p : poses) {
        PoseRecord q = p;
        q.position = rotate_vec(g, p.position);
        q.rotation = matmul(g, p.rotation);
        out.push_back(q);
    }
    return out;
}

ScalePartition filter_scale(const std::vector<CameraPath>& clips, const ScaleBand& band) {
    if (clips.empty()) throw DomainError("filter_scale: empty corpus");
    if (!(band.lo > 0.0 && band.hi >= band.lo))
        throw DomainError("filter_scale: band must satisfy 0 < lo <= hi");

    ScalePartition part;
    part.median_steps.reserve(clips.size());
    for (std::size_t i = 0; i < clips.size(); ++i) {
        if (clips[i].frames() < 2)
            throw DomainError("filter_scale: clip " + std::to_string(i) +
                              " has fewer than 2 frames");
        std::vector<double> steps;
        steps.reserve(static_cast<std::size_t>(clips[i].frames() - 1));
        for (std::size_t k = 0; k + 1 < clips[i].positions.size(); ++k)
            steps.push_back((clips[i].positions[k + 1] - clips[i].positions[k]).norm());
        part.median_steps.push_back(median(std::move(steps)));
    }
    part.corpus_median = median(part.median_steps);

    const double lo = band.lo * part.corpus_median;
    const double hi = band.hi * part.corpus_median;
    for (std::size_t i = 0; i < clips.size(); ++i) {
        if (part.median_steps[i] >= lo && part.median_steps[i] <= hi)
            part.kept.push_back(i);
        else
            part.rejected.push_back(i);
    }
    return part;
}

std::vector<int> slice_starts(int total_frames, int f, const SliceOptions& opts) {
    if (f < 1) throw DomainError("slice_clips: target frame count must be >= 1");
    if (total_frames < f)
        throw DomainError("slice_clips: path has " + std::to_string(total_frames) +
                          " frames, need at least " + std::to_string(f));

    std::vector<int> starts;
    if (opts.policy == SlicePolicy::uniform) {
        const int stride = opts.stride > 0 ? opts.stride : f;
        for (int start = 0; start + f <= total_frames; start += stride) starts.push_back(start);
        return starts;
    }

    const int avail = total_frames - f + 1;
    if (opts.count < 1)
        throw DomainError("slice_clips: random policy needs count >= 1");
    if (opts.count > avail)
        throw DomainError("slice_clips: cannot draw " + std::to_string(opts.count) +
                          " starts without replacement from " + std::to_string(avail));

    // Partial Fisher-Yates over all candidate starts.
    starts.resize(static_cast<std::size_t>(avail));
    for (int i = 0; i < avail; ++i) starts[static_cast<std::size_t>(i)] = i;
    Rng rng(opts.seed);
    for (int i = 0; i < opts.count; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       static_cast<std::size_t>(rng.uniform_below(
                           static_cast<std::uint64_t>(avail - i)));
        std::swap(starts[static_cast<std::size_t>(i)], starts[j]);
    }
    starts.resize(static_cast<std::size_t>(opts.count));
    std::sort(starts.begin(), starts.end());
    return starts;
}

std::vector<CameraPath> slice_clips(const CameraPath& path, int f, const SliceOptions& opts) {
    std::vector<CameraPath> out;
    for (int start : slice_starts(path.frames(), f, opts)) {
        CameraPath w;
        w.positions.assign(path.positions.begin() + start, path.positions.begin() + start + f);
        out.push_back(std::move(w));
    }
    return out;
}

namespace {

nlohmann::json clip_to_json(const ClipManifest& clip) {
    nlohmann::json j;
    j["id"] = clip.id;
    j["start_frame"] = clip.start_frame;
    j["frames"] = clip.path.frames();
    j["flags"] = {{"gravity_aligned", clip.flags.gravity_aligned},
                  {"uniform", clip.flags.uniform},
                  {"scale_ok", clip.flags.scale_ok}};
    j["reference_step"] = clip.flow_scale.reference_step;
    j["scale"] = clip.flow_scale.scale;
    auto& flow = j["flow"] = nlohmann::json::array();
    for (const Vec3& d : clip.flow_scale.flow) flow.push_back({d.x, d.y, d.z});
    auto& pos = j["positions"] = nlohmann::json::array();
    for (const Vec3& p : clip.path.positions) pos.push_back({p.x, p.y, p.z});
    return j;
}

} // namespace

void emit_manifest(const std::vector<ClipManifest>& clips, const std::string& file) {
    std::vector<std::string> offenders;
    for (const ClipManifest& clip : clips) {
        std::string why;
        if (!clip.flags.gravity_aligned) why += " gravity_aligned";
        if (!clip.flags.uniform) why += " uniform";
        if (!clip.flags.scale_ok) why += " scale_ok";
        if (!why.empty()) offenders.push_back("clip '" + clip.id + "': false flags:" + why);
    }
    if (!offenders.empty()) {
        std::string msg = "emit_manifest: refusing unclean clips";
        for (const std::string& o : offenders) msg += "; " + o;
        throw ValidationError(msg);
    }

    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    for (const ClipManifest& clip : clips) out << clip_to_json(clip).dump() << '\n';
    if (!out) throw Error("write failed for '" + file + "'");
}

std::vector<ClipManifest> load_manifest(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");

    std::vector<ClipManifest> clips;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("manifest '" + file + "' line " + std::to_string(line_no) + ": " +
                                 e.what(),
                             e.byte > 0 ? e.byte - 1 : 0);
        }

        ClipManifest clip;
        clip.id = j.at("id").get<std::string>();
        clip.start_frame = j.at("start_frame").get<int>();
        const auto& flags = j.at("flags");
        clip.flags.gravity_aligned = flags.at("gravity_aligned").get<bool>();
        clip.flags.uniform = flags.at("uniform").get<bool>();
        clip.flags.scale_ok = flags.at("scale_ok").get<bool>();
        clip.flow_scale.reference_step = j.at("reference_step").get<double>();
        clip.flow_scale.scale = j.at("scale").get<double>();
        for (const auto& d : j.at("flow")) {
            if (!d.is_array() || d.size() != 3)
                throw ParseError("manifest '" + file + "' line " + std::to_string(line_no) +
                                     ": flow entries must be [x, y, z]",
                                 0);
            clip.flow_scale.flow.push_back(
                {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()});
        }
        for (const auto& p : j.at("positions")) {
            if (!p.is_array() || p.size() != 3)
                throw ParseError("manifest '" + file + "' line " + std::to_string(line_no) +
                                     ": positions must be [x, y, z]",
                                 0);
            clip.path.positions.push_back(
                {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
        }
        if (j.at("frames").get<int>() != clip.path.frames())
            throw ValidationError("manifest '" + file + "' line " + std::to_string(line_no) +
                                  ": frames field does not match positions length");
        if (!clip.flags.gravity_aligned || !clip.flags.uniform || !clip.flags.scale_ok)
            throw ValidationError("manifest '" + file + "' line " + std::to_string(line_no) +
                                  ": clip has false quality flags");
        clips.push_back(std::move(clip));
    }
    return clips;
}

void write_rejection_csv(const std::vector<Rejection>& rejections, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");

    const auto escape = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char ch : s) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        quoted += '"';
        return quoted;
    };

    out << "clip_id,reason,measured\n";
    char buf[64];
    for (const Rejection& r : rejections) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.measured);
        out << escape(r.clip_id) << ',' << escape(r.reason) << ',' << buf << '\n';
    }
    if (!out) throw Error("write failed for '" + file + "'");
}

} // namespace panoloom

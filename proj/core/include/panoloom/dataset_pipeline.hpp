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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "panoloom/trajectory.hpp"
#include "panoloom/vec3.hpp"

namespace panoloom {

// One upstream pose estimate: world-from-camera rotation plus position.
// Orthonormality is checked at load (within 1e-6).
struct PoseRecord {
    int frame = 0;
    Vec3 position;
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1}; // row-major
};

// Pose text format: `frame tx ty tz r00 r01 r02 r10 ... r22` per line,
// '#' comments allowed. JSON alternative: [{"frame", "position", "rotation"}].
std::vector<PoseRecord> load_poses_text(const std::string& file);
std::vector<PoseRecord> load_poses_json(const std::string& file);
void save_poses_text(const std::vector<PoseRecord>& poses, const std::string& file);

// Applies one global rotation taking the estimated up direction (mean of the
// per-pose camera-up columns, or up_hint when given) onto +y. Pure rotation:
// pairwise distances survive within 1e-9. Near-zero mean without a hint
// throws AlignmentError. Residual yaw is left at the first frame's heading.
std::vector<PoseRecord> gravity_align(const std::vector<PoseRecord>& poses,
                                      const Vec3* up_hint = nullptr);

struct ScaleBand {
    double lo = 0.5;
    double hi = 2.0;
};

struct ScalePartition {
    std::vector<std::size_t> kept;     // indices into the input corpus
    std::vector<std::size_t> rejected;
    std::vector<double> median_steps;  // per input clip
    double corpus_median = 0.0;
};

// Keeps a clip iff its median per-frame step lies in [lo*M, hi*M], M being
// the corpus median of per-clip medians.
ScalePartition filter_scale(const std::vector<CameraPath>& clips, const ScaleBand& band = {});

enum class SlicePolicy { random, uniform };

struct SliceOptions {
    SlicePolicy policy = SlicePolicy::uniform;
    int stride = 0;         // uniform: start spacing; <= 0 means stride = f
    int count = 1;          // random: number of windows, drawn w/o replacement
    std::uint64_t seed = 0; // random policy only
};

// Window start indices for a path of `total_frames`; slice_clips copies the
// windows these describe. Sorted ascending under either policy.
std::vector<int> slice_starts(int total_frames, int f, const SliceOptions& opts);

std::vector<CameraPath> slice_clips(const CameraPath& path, int f, const SliceOptions& opts);

struct ClipFlags {
    bool gravity_aligned = false;
    bool uniform = false;
    bool scale_ok = false;
};

struct ClipManifest {
    std::string id;
    int start_frame = 0;
    CameraPath path;
    FlowScale flow_scale;
    ClipFlags flags;
};

// JSONL, one self-contained clip per line; refuses clips with any flag false
// (ValidationError lists every offender). Round-trips bit-exactly.
void emit_manifest(const std::vector<ClipManifest>& clips, const std::string& file);
std::vector<ClipManifest> load_manifest(const std::string& file);

struct Rejection {
    std::string clip_id;
    std::string reason;
    double measured = 0.0;
};

void write_rejection_csv(const std::vector<Rejection>& rejections, const std::string& file);

} // namespace panoloom

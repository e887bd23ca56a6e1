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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "panoloom/vec3.hpp"

namespace panoloom {

// Camera path in the canonical rotation-free frame: per-frame positions only,
// orientation implicitly constant. y is up, z is forward.
struct CameraPath {
    std::vector<Vec3> positions;

    int frames() const { return static_cast<int>(positions.size()); }
};

// Decomposition of a camera path into per-step unit directions ("flow") and a
// single positive step-length multiplier ("scale"). scale == 1 means the
// camera advances by reference_step scene units per frame.
struct FlowScale {
    std::vector<Vec3> flow;      // one unit vector per displacement step
    double scale = 1.0;          // mean step length / reference_step
    double reference_step = 1.0; // scene units
};

struct UniformVelocityReport {
    double max_rel_deviation = 0.0; // max_k |step_k - mean| / mean
    double mean_step = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Checks the near-constant-speed assumption. Throws DegenerateStepError when
// every displacement is zero (the deviation would be undefined).
UniformVelocityReport validate_uniform(const CameraPath& path, double tol = 0.10);

// path -> FlowScale. Requires the path to pass validate_uniform(tol); any
// individual zero-length step is a hard DegenerateStepError rather than a
// silent direction reuse.
FlowScale decompose(const CameraPath& path, double reference_step, double tol = 0.10);

// FlowScale -> path: p_0 = origin, p_{k+1} = p_k + scale * reference_step * d_k.
CameraPath recompose(const FlowScale& fs, const Vec3& origin = {});

// The six synthetic evaluation trajectories (the seventh class, GT, comes
// from pose files). All are constant-speed with exactly equal step lengths;
// `loop` closes onto its start position at the final frame.
enum class TrajectoryKind { forward, backward, left, right, s_curve, loop };

TrajectoryKind trajectory_kind_from_string(std::string_view name);
std::string to_string(TrajectoryKind kind);

CameraPath standard_trajectory(TrajectoryKind kind, int frames, double step);

// Trajectory manifest: JSON Lines, one {"frame", "x", "y", "z"} per frame.
void save_trajectory_jsonl(const CameraPath& path, std::ostream& out);
void save_trajectory_jsonl(const CameraPath& path, const std::string& file);
CameraPath load_trajectory_jsonl(std::istream& in);
CameraPath load_trajectory_jsonl(const std::string& file);

// FlowScale file: JSON {"reference_step", "scale", "flow": [[dx,dy,dz], ...]}.
void save_flow_scale_json(const FlowScale& fs, const std::string& file);
FlowScale load_flow_scale_json(const std::string& file);

} // namespace panoloom

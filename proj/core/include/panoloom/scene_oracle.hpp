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

#include <cstdint>
#include <string>
#include <vector>

#include "panoloom/image.hpp"
#include "panoloom/trajectory.hpp"
#include "panoloom/vec3.hpp"

namespace panoloom {

// Deterministic CPU ray caster over a handful of analytic primitives. It
// exists to manufacture ground-truth panoramic video: good enough parallax
// and texture for geometry/metric tests, fast enough to run per-commit.

struct Checker {
    Vec3 color_a{0.9, 0.9, 0.9};
    Vec3 color_b{0.1, 0.1, 0.1};
    double cell = 1.0; // world-space cell edge, so translation shifts texture
};

struct ScenePrimitive {
    enum class Kind { sphere, box, floor };
    Kind kind = Kind::sphere;

    Vec3 center;        // sphere
    double radius = 1.0;
    Vec3 box_min, box_max; // box
    double floor_y = 0.0;  // floor plane y = floor_y

    bool checkered = false;
    Vec3 color{0.8, 0.8, 0.8}; // used when !checkered
    Checker checker;
};

struct SkyGradient {
    Vec3 zenith{0.25, 0.45, 0.85};
    Vec3 horizon{0.80, 0.85, 0.95};
    Vec3 nadir{0.20, 0.18, 0.16};
};

struct ProceduralScene {
    std::vector<ScenePrimitive> primitives;
    SkyGradient background;
    std::uint64_t seed = 0;
    // Rigid yaw of the whole scene about world y, applied at trace time so
    // boxes stay analytic; radians, positive toward increasing longitude.
    double world_yaw = 0.0;
};

// Random room-like scene: checkered floor plus seed-placed spheres and boxes
// scattered around the origin, leaving a free bubble for the camera.
ProceduralScene make_default_scene(std::uint64_t seed);

// Whole scene rotated by `yaw` radians about the world y axis (positive yaw
// moves content toward increasing longitude). Used by equivariance tests.
ProceduralScene yaw_scene(const ProceduralScene& scene, double yaw);

// Shades a single ray; exposed for pixel-level oracles in tests.
Vec3 shade_ray(const ProceduralScene& scene, const Vec3& origin, const Vec3& dir);

// Fixed world-aligned orientation, one ray per texel center.
ErpFrame render_erp(const ProceduralScene& scene, const Vec3& position, int width, int height,
                    int threads = 1);

std::vector<ErpFrame> render_sequence(const ProceduralScene& scene, const CameraPath& path,
                                      int width, int height, int threads = 1);

// Scene description JSON round-trip.
void save_scene_json(const ProceduralScene& scene, const std::string& file);
ProceduralScene load_scene_json(const std::string& file);

} // namespace panoloom

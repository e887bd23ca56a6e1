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
#include <optional>
#include <utility>

#include "panoloom/image.hpp"
#include "panoloom/vec3.hpp"

namespace panoloom {

// Equirectangular projection math.
//
// Angle convention, fixed project-wide:
//   phi   = 2*pi * (u / W - 1/2)   longitude, increases to the right
//   theta =   pi * (1/2 - v / H)   latitude, increases upward
//   unit vector: x = cos(theta) sin(phi), y = sin(theta), z = cos(theta) cos(phi)
// Continuous pixel coordinates put the center of texel (i, j) at
// (i + 0.5, j + 0.5), which makes integer-column cyclic shifts exact.

// Direction on the unit sphere. phi in [-pi, pi), theta in [-pi/2, pi/2].
struct SphericalDirection {
    double phi = 0.0;
    double theta = 0.0;

    Vec3 unit() const;
    static SphericalDirection from_unit(const Vec3& v);
};

// Wraps an arbitrary longitude into [-pi, pi).
double wrap_phi(double phi);

// Continuous ERP pixel -> ray. u wraps horizontally; v outside [0, H] is a
// DomainError. (W/2, H/2) maps to (phi=0, theta=0).
SphericalDirection pixel_to_ray(double u, double v, int width, int height);

// Exact inverse of pixel_to_ray; total after phi-wrapping. Returns (u, v).
std::pair<double, double> ray_to_pixel(const SphericalDirection& dir, int width, int height);

// Bilinear sample at continuous (u, v) with cyclic horizontal wrap and
// vertical clamp. Texel centers sit at half-integer coordinates.
Rgb sample_bilinear(const Image& img, double u, double v);

// Rotates panorama content eastward by delta_phi: the output at longitude
// phi + delta_phi equals the input at longitude phi. Integer-column shifts
// are bit-exact; fractional shifts use bilinear interpolation.
ErpFrame yaw_rotate(const ErpFrame& frame, double delta_phi);

// Pinhole camera looking along (yaw, pitch) with a horizontal field of view.
struct PerspectiveCamera {
    double fov_deg = 90.0;
    int out_width = 512;
    int out_height = 512;
    double yaw = 0.0;   // radians
    double pitch = 0.0; // radians
};

// World-space ray through the camera pixel at continuous (u, v).
Vec3 camera_ray(const PerspectiveCamera& cam, double u, double v);

// Projects a world direction into camera pixel coordinates; nullopt when the
// direction is outside the (open) forward hemisphere of the camera.
std::optional<std::pair<double, double>> camera_project(const PerspectiveCamera& cam,
                                                        const Vec3& dir);

// Resamples a pinhole view out of the panorama (bilinear, seam-aware).
Image render_perspective(const ErpFrame& frame, const PerspectiveCamera& cam);

// The five 512x512, 120-degree-fov perspective crops at pitch 0 and evenly
// spaced yaws (72 degrees apart), jointly covering every longitude.
std::array<double, 5> five_crop_yaws();
std::array<Image, 5> five_crop_set(const ErpFrame& frame);

} // namespace panoloom

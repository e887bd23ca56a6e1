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

#include "panoloom/erp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "panoloom/errors.hpp"

namespace panoloom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_erp(const Image& img, const char* op) {
    if (!is_erp(img)) {
        throw DomainError(std::string(op) + ": frame is not 2:1 equirectangular (" +
                          std::to_string(img.width) + "x" + std::to_string(img.height) + ")");
    }
}

int wrap_column(long long c, int width) {
    long long m = c % width;
    if (m < 0) m += width;
    return static_cast<int>(m);
}

} // namespace

Vec3 SphericalDirection::unit() const {
    const double ct = std::cos(theta);
    return {ct * std::sin(phi), std::sin(theta), ct * std::cos(phi)};
}

SphericalDirection SphericalDirection::from_unit(const Vec3& v) {
    SphericalDirection d;
    d.theta = std::asin(std::clamp(v.y, -1.0, 1.0));
    d.phi = (v.x == 0.0 && v.z == 0.0) ? 0.0 : wrap_phi(std::atan2(v.x, v.z));
    return d;
}

double wrap_phi(double phi) {
    double p = std::fmod(phi + kPi, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    return p - kPi;
}

SphericalDirection pixel_to_ray(double u, double v, int width, int height) {
    if (width != 2 * height || height <= 0) {
        throw DomainError("pixel_to_ray: width must equal 2 * height");
    }
    if (!(v >= 0.0 && v <= static_cast<double>(height)) || !std::isfinite(u)) {
        throw DomainError("pixel_to_ray: v out of [0, H] (v does not wrap)");
    }
    SphericalDirection d;
    d.phi = wrap_phi(kTwoPi * (u / width - 0.5));
    d.theta = kPi * (0.5 - v / height);
    return d;
}

std::pair<double, double> ray_to_pixel(const SphericalDirection& dir, int width, int height) {
    if (width != 2 * height || height <= 0) {
        throw DomainError("ray_to_pixel: width must equal 2 * height");
    }
    const double phi = wrap_phi(dir.phi);
    const double u = width * (phi / kTwoPi + 0.5);
    const double v = height * (0.5 - dir.theta / kPi);
    return {u, v};
}

Rgb sample_bilinear(const Image& img, double u, double v) {
    const double x = u - 0.5;
    const double y = v - 0.5;
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const double tx = x - fx;
    const double ty = y - fy;

    const int c0 = wrap_column(static_cast<long long>(fx), img.width);
    const int c1 = wrap_column(static_cast<long long>(fx) + 1, img.width);
    const int r0 = std::clamp(static_cast<int>(fy), 0, img.height - 1);
    const int r1 = std::clamp(static_cast<int>(fy) + 1, 0, img.height - 1);

    const Rgb p00 = img.at(c0, r0);
    const Rgb p10 = img.at(c1, r0);
    const Rgb p01 = img.at(c0, r1);
    const Rgb p11 = img.at(c1, r1);

    const double w00 = (1.0 - tx) * (1.0 - ty);
    const double w10 = tx * (1.0 - ty);
    const double w01 = (1.0 - tx) * ty;
    const double w11 = tx * ty;

    return {w00 * p00.r + w10 * p10.r + w01 * p01.r + w11 * p11.r,
            w00 * p00.g + w10 * p10.g + w01 * p01.g + w11 * p11.g,
            w00 * p00.b + w10 * p10.b + w01 * p01.b + w11 * p11.b};
}

ErpFrame yaw_rotate(const ErpFrame& frame, double delta_phi) {
    require_erp(frame, "yaw_rotate");
    const int w = frame.width;
    const int h = frame.height;
    const double shift = delta_phi * w / kTwoPi;
    const double nearest = std::round(shift);

    ErpFrame out(w, h);
    if (std::abs(shift - nearest) < 1e-9) {
        // Pure cyclic column shift: copy rows with a rotated column origin.
        const int s = wrap_column(static_cast<long long>(nearest), w);
        for (int y = 0; y < h; ++y) {
            const std::uint8_t* src = frame.rgb.data() + frame.offset(0, y);
            std::uint8_t* dst = out.rgb.data() + out.offset(0, y);
            const std::size_t tail = static_cast<std::size_t>(w - s) * 3;
            std::memcpy(dst + static_cast<std::size_t>(s) * 3, src, tail);
            std::memcpy(dst, src + tail, static_cast<std::size_t>(s) * 3);
        }
        return out;
    }

    for (int y = 0; y < h; ++y) {
        const double v = y + 0.5;
        for (int x = 0; x < w; ++x) {
            out.set(x, y, sample_bilinear(frame, (x + 0.5) - shift, v));
        }
    }
    return out;
}

namespace {

// Orthonormal camera basis: forward along (yaw, pitch), right toward
// increasing longitude, up completing the right-handed triple.
struct CameraBasis {
    Vec3 forward, right, up;
    double tan_half_fov;
    double aspect; // out_height / out_width
};

CameraBasis camera_basis(const PerspectiveCamera& cam) {
    if (!(cam.fov_deg > 0.0 && cam.fov_deg < 180.0)) {
        throw DomainError("perspective camera requires 0 < fov < 180 degrees");
    }
    if (cam.out_width <= 0 || cam.out_height <= 0) {
        throw DomainError("perspective camera output dimensions must be positive");
    }
    CameraBasis b;
    b.forward = SphericalDirection{cam.yaw, cam.pitch}.unit();
    b.right = {std::cos(cam.yaw), 0.0, -std::sin(cam.yaw)};
    b.up = b.forward.cross(b.right);
    b.tan_half_fov = std::tan(cam.fov_deg * kPi / 360.0);
    b.aspect = static_cast<double>(cam.out_height) / cam.out_width;
    return b;
}

} // namespace

Vec3 camera_ray(const PerspectiveCamera& cam, double u, double v) {
    const CameraBasis b = camera_basis(cam);
    const double xc = (2.0 * u / cam.out_width - 1.0) * b.tan_half_fov;
    const double yc = (1.0 - 2.0 * v / cam.out_height) * b.tan_half_fov * b.aspect;
    return (b.forward + b.right * xc + b.up * yc).normalized();
}

std::optional<std::pair<double, double>> camera_project(const PerspectiveCamera& cam,
                                                        const Vec3& dir) {
    const CameraBasis b = camera_basis(cam);
    const double depth = dir.dot(b.forward);
    if (depth <= 0.0) return std::nullopt;
    const double xc = dir.dot(b.right) / depth;
    const double yc = dir.dot(b.up) / depth;
    const double u = (xc / b.tan_half_fov + 1.0) * 0.5 * cam.out_width;
    const double v = (1.0 - yc / (b.tan_half_fov * b.aspect)) * 0.5 * cam.out_height;
    return std::make_pair(u, v);
}

Image render_perspective(const ErpFrame& frame, const PerspectiveCamera& cam) {
    require_erp(frame, "render_perspective");
    const CameraBasis b = camera_basis(cam);

    Image out(cam.out_width, cam.out_height);
    for (int y = 0; y < cam.out_height; ++y) {
        const double yc = (1.0 - 2.0 * (y + 0.5) / cam.out_height) * b.tan_half_fov * b.aspect;
        for (int x = 0; x < cam.out_width; ++x) {
            const double xc = (2.0 * (x + 0.5) / cam.out_width - 1.0) * b.tan_half_fov;
            const Vec3 d = (b.forward + b.right * xc + b.up * yc).normalized();
            const auto [u, v] = ray_to_pixel(SphericalDirection::from_unit(d),
                                             frame.width, frame.height);
            out.set(x, y, sample_bilinear(frame, u, v));
        }
    }
    return out;
}

std::array<double, 5> five_crop_yaws() {
    std::array<double, 5> yaws{};
    for (int i = 0; i < 5; ++i) yaws[i] = wrap_phi(i * kTwoPi / 5.0);
    return yaws;
}

std::array<Image, 5> five_crop_set(const ErpFrame& frame) {
    require_erp(frame, "five_crop_set");
    std::array<Image, 5> crops;
    const auto yaws = five_crop_yaws();
    for (int i = 0; i < 5; ++i) {
        PerspectiveCamera cam;
        cam.fov_deg = 120.0;
        cam.out_width = 512;
        cam.out_height = 512;
        cam.yaw = yaws[i];
        cam.pitch = 0.0;
        crops[i] = render_perspective(frame, cam);
    }
    return crops;
}

} // namespace panoloom

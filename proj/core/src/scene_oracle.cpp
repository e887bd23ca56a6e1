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

#include "panoloom/scene_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <nlohmann/json.hpp>

#include "panoloom/erp_geometry.hpp"
#include "panoloom/errors.hpp"
#include "panoloom/rng.hpp"

namespace panoloom {

namespace {

constexpr double kRayEps = 1e-9;

Vec3 rotate_y(const Vec3& p, double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {p.x * c + p.z * s, p.y, -p.x * s + p.z * c};
}

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 point;
    Vec3 normal;
    const ScenePrimitive* prim = nullptr;
};

bool hit_sphere(const ScenePrimitive& prim, const Vec3& o, const Vec3& d, Hit& hit) {
    const Vec3 oc = o - prim.center;
    const double b = oc.dot(d);
    const double c = oc.dot(oc) - prim.radius * prim.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    double t = -b - sq;
    if (t <= kRayEps) t = -b + sq;
    if (t <= kRayEps || t >= hit.t) return false;
    hit.t = t;
    hit.point = o + d * t;
    hit.normal = (hit.point - prim.center) / prim.radius;
    hit.prim = &prim;
    return true;
}

bool hit_box(const ScenePrimitive& prim, const Vec3& o, const Vec3& d, Hit& hit) {
    double t_lo = kRayEps;
    double t_hi = hit.t;
    int axis = -1;
    double lo_sign = 0.0;

    const double omin[3] = {prim.box_min.x, prim.box_min.y, prim.box_min.z};
    const double omax[3] = {prim.box_max.x, prim.box_max.y, prim.box_max.z};
    const double oo[3] = {o.x, o.y, o.z};
    const double dd[3] = {d.x, d.y, d.z};

    for (int i = 0; i < 3; ++i) {
        if (dd[i] == 0.0) {
            if (oo[i] < omin[i] || oo[i] > omax[i]) return false;
            continue;
        }
        const double inv = 1.0 / dd[i];
        double t0 = (omin[i] - oo[i]) * inv;
        double t1 = (omax[i] - oo[i]) * inv;
        double sign = -1.0;
        if (t0 > t1) {
            std::swap(t0, t1);
            sign = 1.0;
        }
        if (t0 > t_lo) {
            t_lo = t0;
            axis = i;
            lo_sign = sign;
        }
        t_hi = std::min(t_hi, t1);
        if (t_lo > t_hi) return false;
    }
    if (axis < 0) return false; // origin inside: skip, boxes are opaque scenery
    hit.t = t_lo;
    hit.point = o + d * t_lo;
    hit.normal = {axis == 0 ? lo_sign : 0.0, axis == 1 ? lo_sign : 0.0,
                  axis == 2 ? lo_sign : 0.0};
    hit.prim = &prim;
    return true;
}

bool hit_floor(const ScenePrimitive& prim, const Vec3& o, const Vec3& d, Hit& hit) {
    if (d.y == 0.0) return false;
    const double t = (prim.floor_y - o.y) / d.y;
    if (t <= kRayEps || t >= hit.t) return false;
    hit.t = t;
    hit.point = o + d * t;
    hit.normal = {0.0, o.y >= prim.floor_y ? 1.0 : -1.0, 0.0};
    hit.prim = &prim;
    return true;
}

Vec3 primitive_albedo(const ScenePrimitive& prim, const Vec3& p) {
    if (!prim.checkered) return prim.color;
    const auto cell = [&](double x) {
        return static_cast<long long>(std::floor(x / prim.checker.cell));
    };
    const long long parity = cell(p.x) + cell(p.y) + cell(p.z);
    return (parity & 1) == 0 ? prim.checker.color_a : prim.checker.color_b;
}

Vec3 background_color(const SkyGradient& sky, const Vec3& d) {
    const double y = std::clamp(d.y, -1.0, 1.0);
    if (y >= 0.0)
        return sky.horizon + (sky.zenith - sky.horizon) * y;
    return sky.horizon + (sky.nadir - sky.horizon) * (-y);
}

} // namespace

Vec3 shade_ray(const ProceduralScene& scene, const Vec3& origin, const Vec3& dir) {
    // Trace in the scene-local frame so world_yaw is an exact rigid motion.
    const Vec3 o = rotate_y(origin, -scene.world_yaw);
    const Vec3 d = rotate_y(dir, -scene.world_yaw);

    Hit hit;
    for (const ScenePrimitive& prim : scene.primitives) {
        switch (prim.kind) {
        case ScenePrimitive::Kind::sphere: hit_sphere(prim, o, d, hit); break;
        case ScenePrimitive::Kind::box: hit_box(prim, o, d, hit); break;
        case ScenePrimitive::Kind::floor: hit_floor(prim, o, d, hit); break;
        }
    }
    if (!hit.prim) return background_color(scene.background, d);

    static const Vec3 kLight = Vec3{0.42, 0.8, 0.43}.normalized(); // scene frame
    const Vec3 albedo = primitive_albedo(*hit.prim, hit.point);
    const double lambert = std::max(0.0, hit.normal.dot(kLight));
    // Mild distance fade keeps far geometry from aliasing into flat bands.
    const double fade = 1.0 / (1.0 + 0.002 * hit.t * hit.t);
    return albedo * ((0.35 + 0.65 * lambert) * fade);
}

ErpFrame render_erp(const ProceduralScene& scene, const Vec3& position, int width, int height,
                    int threads) {
    if (width != 2 * height || height <= 0)
        throw DomainError("render_erp: width must equal 2 * height");
    threads = std::clamp(threads, 1, height);

    ErpFrame out(width, height);
    const auto rows = [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < width; ++x) {
                const Vec3 dir = pixel_to_ray(x + 0.5, y + 0.5, width, height).unit();
                const Vec3 c = shade_ray(scene, position, dir);
                out.set(x, y,
                        {255.0 * std::clamp(c.x, 0.0, 1.0), 255.0 * std::clamp(c.y, 0.0, 1.0),
                         255.0 * std::clamp(c.z, 0.0, 1.0)});
            }
        }
    };

    if (threads == 1) {
        rows(0, height);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (height + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(rows, t * chunk, std::min(height, (t + 1) * chunk));
    for (std::thread& th : pool) th.join();
    return out;
}

std::vector<ErpFrame> render_sequence(const ProceduralScene& scene, const CameraPath& path,
                                      int width, int height, int threads) {
    std::vector<ErpFrame> frames;
    frames.reserve(path.positions.size());
    for (const Vec3& p : path.positions)
        frames.push_back(render_erp(scene, p, width, height, threads));
    return frames;
}

ProceduralScene yaw_scene(const ProceduralScene& scene, double yaw) {
    ProceduralScene out = scene;
    out.world_yaw += yaw;
    return out;
}

ProceduralScene make_default_scene(std::uint64_t seed) {
    Rng rng(seed);
    ProceduralScene scene;
    scene.seed = seed;

    ScenePrimitive floor;
    floor.kind = ScenePrimitive::Kind::floor;
    floor.floor_y = -1.5;
    floor.checkered = true;
    // Coarse cell: under camera travel of a few meters the floor pattern
    // decorrelates monotonically instead of phase-aliasing back into step.
    floor.checker.cell = 4.5 + rng.uniform_real(0.0, 1.0);
    floor.checker.color_a = {0.85, 0.81, 0.74};
    floor.checker.color_b = {0.33, 0.30, 0.29};
    scene.primitives.push_back(floor);

    const Vec3 palette[6] = {{0.85, 0.30, 0.25}, {0.25, 0.55, 0.85}, {0.30, 0.75, 0.40},
                             {0.90, 0.75, 0.25}, {0.70, 0.40, 0.80}, {0.90, 0.55, 0.30}};

    const int spheres = 5 + rng.uniform_int(0, 2);
    for (int i = 0; i < spheres; ++i) {
        ScenePrimitive s;
        s.kind = ScenePrimitive::Kind::sphere;
        const double ang = rng.uniform_real(0.0, 2.0 * 3.14159265358979323846);
        const double dist = rng.uniform_real(5.0, 10.0);
        s.radius = rng.uniform_real(0.6, 1.4);
        s.center = {dist * std::sin(ang), -1.5 + s.radius + rng.uniform_real(0.0, 1.8),
                    dist * std::cos(ang)};
        if (rng.uniform01() < 0.35) {
            s.checkered = true;
            s.checker.cell = rng.uniform_real(0.35, 0.8);
            s.checker.color_a = palette[rng.uniform_int(0, 5)];
            s.checker.color_b = {0.95, 0.95, 0.92};
        } else {
            s.color = palette[rng.uniform_int(0, 5)];
        }
        scene.primitives.push_back(s);
    }

    const int boxes = 3 + rng.uniform_int(0, 2);
    for (int i = 0; i < boxes; ++i) {
        ScenePrimitive b;
        b.kind = ScenePrimitive::Kind::box;
        const double ang = rng.uniform_real(0.0, 2.0 * 3.14159265358979323846);
        const double dist = rng.uniform_real(6.0, 11.0);
        const double cx = dist * std::sin(ang);
        const double cz = dist * std::cos(ang);
        const double half = rng.uniform_real(0.5, 1.4);
        const double h = rng.uniform_real(1.0, 3.2);
        b.box_min = {cx - half, -1.5, cz - half};
        b.box_max = {cx + half, -1.5 + h, cz + half};
        if (rng.uniform01() < 0.5) {
            b.checkered = true;
            b.checker.cell = rng.uniform_real(0.4, 0.9);
            b.checker.color_a = palette[rng.uniform_int(0, 5)];
            b.checker.color_b = {0.15, 0.15, 0.18};
        } else {
            b.color = palette[rng.uniform_int(0, 5)];
        }
        scene.primitives.push_back(b);
    }
    return scene;
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json{v.x, v.y, v.z}; }

Vec3 vec_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw ParseError(std::string("scene: ") + what + " must be [x, y, z]", 0);
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

void save_scene_json(const ProceduralScene& scene, const std::string& file) {
    nlohmann::json doc;
    doc["seed"] = scene.seed;
    doc["world_yaw"] = scene.world_yaw;
    doc["background"] = {{"zenith", vec_json(scene.background.zenith)},
                         {"horizon", vec_json(scene.background.horizon)},
                         {"nadir", vec_json(scene.background.nadir)}};
    auto& prims = doc["primitives"] = nlohmann::json::array();
    for (const ScenePrimitive& p : scene.primitives) {
        nlohmann::json j;
        switch (p.kind) {
        case ScenePrimitive::Kind::sphere:
            j["type"] = "sphere";
            j["center"] = vec_json(p.center);
            j["radius"] = p.radius;
            break;
        case ScenePrimitive::Kind::box:
            j["type"] = "box";
            j["min"] = vec_json(p.box_min);
            j["max"] = vec_json(p.box_max);
            break;
        case ScenePrimitive::Kind::floor:
            j["type"] = "floor";
            j["y"] = p.floor_y;
            break;
        }
        if (p.checkered) {
            j["checker"] = {{"cell", p.checker.cell},
                            {"color_a", vec_json(p.checker.color_a)},
                            {"color_b", vec_json(p.checker.color_b)}};
        } else {
            j["color"] = vec_json(p.color);
        }
        prims.push_back(std::move(j));
    }

    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + file + "'");
}

ProceduralScene load_scene_json(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("scene file '" + file + "': " + e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }

    ProceduralScene scene;
    scene.seed = doc.value("seed", std::uint64_t{0});
    scene.world_yaw = doc.value("world_yaw", 0.0);
    if (doc.contains("background")) {
        const auto& bg = doc["background"];
        if (bg.contains("zenith")) scene.background.zenith = vec_from_json(bg["zenith"], "zenith");
        if (bg.contains("horizon"))
            scene.background.horizon = vec_from_json(bg["horizon"], "horizon");
        if (bg.contains("nadir")) scene.background.nadir = vec_from_json(bg["nadir"], "nadir");
    }
    if (!doc.contains("primitives") || !doc["primitives"].is_array())
        throw ParseError("scene file '" + file + "': missing primitives array", 0);

    for (const auto& j : doc["primitives"]) {
        ScenePrimitive p;
        const std::string type = j.value("type", "");
        if (type == "sphere") {
            p.kind = ScenePrimitive::Kind::sphere;
            p.center = vec_from_json(j.at("center"), "sphere center");
            p.radius = j.at("radius").get<double>();
            if (!(p.radius > 0.0))
                throw ValidationError("scene file '" + file + "': sphere radius must be > 0");
        } else if (type == "box") {
            p.kind = ScenePrimitive::Kind::box;
            p.box_min = vec_from_json(j.at("min"), "box min");
            p.box_max = vec_from_json(j.at("max"), "box max");
            if (!(p.box_min.x < p.box_max.x && p.box_min.y < p.box_max.y &&
                  p.box_min.z < p.box_max.z))
                throw ValidationError("scene file '" + file + "': box min must be < max");
        } else if (type == "floor") {
            p.kind = ScenePrimitive::Kind::floor;
            p.floor_y = j.at("y").get<double>();
        } else {
            throw ParseError("scene file '" + file + "': unknown primitive type '" + type + "'",
                             0);
        }
        if (j.contains("checker")) {
            p.checkered = true;
            const auto& c = j["checker"];
            p.checker.cell = c.at("cell").get<double>();
            if (!(p.checker.cell > 0.0))
                throw ValidationError("scene file '" + file + "': checker cell must be > 0");
            p.checker.color_a = vec_from_json(c.at("color_a"), "checker color_a");
            p.checker.color_b = vec_from_json(c.at("color_b"), "checker color_b");
        } else if (j.contains("color")) {
            p.color = vec_from_json(j["color"], "color");
        }
        scene.primitives.push_back(p);
    }
    return scene;
}

} // namespace panoloom

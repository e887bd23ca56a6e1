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

#include "panoloom/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "panoloom/errors.hpp"

namespace panoloom {

namespace {

std::vector<double> step_lengths(const CameraPath& path) {
    std::vector<double> steps;
    steps.reserve(path.positions.size() - 1);
    for (std::size_t k = 0; k + 1 < path.positions.size(); ++k)
        steps.push_back((path.positions[k + 1] - path.positions[k]).norm());
    return steps;
}

} // namespace

UniformVelocityReport validate_uniform(const CameraPath& path, double tol) {
    if (path.frames() < 2)
        throw DomainError("validate_uniform: path needs at least 2 frames, got " +
                          std::to_string(path.frames()));
    if (!(tol >= 0.0))
        throw DomainError("validate_uniform: tolerance must be >= 0");

    const std::vector<double> steps = step_lengths(path);
    const double mean =
        std::accumulate(steps.begin(), steps.end(), 0.0) / static_cast<double>(steps.size());
    if (mean <= 0.0)
        throw DegenerateStepError("validate_uniform: every displacement is zero");

    double max_dev = 0.0;
    for (double s : steps) max_dev = std::max(max_dev, std::abs(s - mean) / mean);

    UniformVelocityReport report;
    report.max_rel_deviation = max_dev;
    report.mean_step = mean;
    report.tolerance = tol;
    report.pass = max_dev <= tol;
    return report;
}

FlowScale decompose(const CameraPath& path, double reference_step, double tol) {
    if (path.frames() < 2)
        throw DomainError("decompose: path needs at least 2 frames, got " +
                          std::to_string(path.frames()));
    if (!(reference_step > 0.0) || !std::isfinite(reference_step))
        throw DomainError("decompose: reference_step must be finite and > 0");

    const std::vector<double> steps = step_lengths(path);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (steps[k] == 0.0)
            throw DegenerateStepError("decompose: zero-length step at frame " +
                                      std::to_string(k) + " -> " + std::to_string(k + 1));
    }

    const UniformVelocityReport report = validate_uniform(path, tol);
    if (!report.pass) {
        std::ostringstream msg;
        msg << "decompose: non-uniform velocity, max relative deviation "
            << report.max_rel_deviation << " exceeds tolerance " << tol;
        throw ValidationError(msg.str());
    }

    FlowScale fs;
    fs.reference_step = reference_step;
    fs.scale = report.mean_step / reference_step;
    fs.flow.reserve(steps.size());
    for (std::size_t k = 0; k + 1 < path.positions.size(); ++k)
        fs.flow.push_back((path.positions[k + 1] - path.positions[k]) / steps[k]);
    return fs;
}

CameraPath recompose(const FlowScale& fs, const Vec3& origin) {
    if (fs.flow.empty()) throw DomainError("recompose: flow is empty");
    if (!(fs.scale > 0.0) || !std::isfinite(fs.scale))
        throw DomainError("recompose: scale must be finite and > 0");
    if (!(fs.reference_step > 0.0) || !std::isfinite(fs.reference_step))
        throw DomainError("recompose: reference_step must be finite and > 0");
    for (std::size_t k = 0; k < fs.flow.size(); ++k) {
        if (std::abs(fs.flow[k].norm() - 1.0) > 1e-9)
            throw DomainError("recompose: flow[" + std::to_string(k) + "] is not a unit vector");
    }

    CameraPath path;
    path.positions.reserve(fs.flow.size() + 1);
    path.positions.push_back(origin);
    const double step = fs.scale * fs.reference_step;
    for (const Vec3& d : fs.flow)
        path.positions.push_back(path.positions.back() + d * step);
    return path;
}

TrajectoryKind trajectory_kind_from_string(std::string_view name) {
    if (name == "forward") return TrajectoryKind::forward;
    if (name == "backward") return TrajectoryKind::backward;
    if (name == "left") return TrajectoryKind::left;
    if (name == "right") return TrajectoryKind::right;
    if (name == "s_curve") return TrajectoryKind::s_curve;
    if (name == "loop") return TrajectoryKind::loop;
    throw DomainError("unknown trajectory kind '" + std::string(name) + "'");
}

std::string to_string(TrajectoryKind kind) {
    switch (kind) {
    case TrajectoryKind::forward: return "forward";
    case TrajectoryKind::backward: return "backward";
    case TrajectoryKind::left: return "left";
    case TrajectoryKind::right: return "right";
    case TrajectoryKind::s_curve: return "s_curve";
    case TrajectoryKind::loop: return "loop";
    }
    throw DomainError("unknown trajectory kind");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit s-curve: one sine period of lateral sweep, amplitude 25% of the
// forward extent. t in [0, 1].
Vec3 s_curve_point(double t) { return {0.25 * std::sin(kTwoPi * t), 0.0, t}; }

// Walks forward from t0 until the chord from `from` reaches `chord`, then
// bisects t. Returns t past 1 when the curve ends before the chord does.
double march_chord(const Vec3& from, double t0, double chord) {
    if ((s_curve_point(1.0) - from).norm() < chord) return 1.0 + chord;
    double lo = t0;
    double hi = t0;
    const double dt = std::max(chord * 0.5, 1e-6);
    while ((s_curve_point(hi) - from).norm() < chord) hi = std::min(hi + dt, 1.0);
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((s_curve_point(mid) - from).norm() < chord ? lo : hi) = mid;
    }
    return hi;
}

// Places `chords` equal-length chords along the unit s-curve so that the last
// endpoint lands on the curve end, by bisecting the common chord length. A
// plain equal-arc resampling would leave relative step deviations around
// kappa^2 h^2 / 24 (~1e-3 here), far above the 1e-6 uniformity budget.
std::vector<Vec3> s_curve_chords(int chords) {
    // Arc length upper-bounds the chord length; Simpson on |c'(t)|.
    const int n = 2048;
    double arc = 0.0;
    auto speed = [](double t) {
        const double dx = 0.25 * kTwoPi * std::cos(kTwoPi * t);
        return std::sqrt(dx * dx + 1.0);
    };
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / n;
        const double b = static_cast<double>(i + 1) / n;
        arc += (b - a) / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
    }

    double lo = 0.5 * arc / chords;
    double hi = arc / chords;
    std::vector<Vec3> pts;
    for (int it = 0; it < 80; ++it) {
        const double chord = 0.5 * (lo + hi);
        pts.assign(1, s_curve_point(0.0));
        double t = 0.0;
        bool overshoot = false;
        for (int k = 0; k < chords; ++k) {
            t = march_chord(pts.back(), t, chord);
            if (t > 1.0) {
                overshoot = true;
                break;
            }
            pts.push_back(s_curve_point(t));
        }
        (overshoot || t >= 1.0 ? hi : lo) = chord;
    }
    // Final walk at the converged length; pin the endpoint onto the curve end.
    pts.assign(1, s_curve_point(0.0));
    double t = 0.0;
    for (int k = 0; k < chords - 1; ++k) {
        t = march_chord(pts.back(), t, hi);
        pts.push_back(s_curve_point(std::min(t, 1.0)));
    }
    pts.push_back(s_curve_point(1.0));
    return pts;
}

} // namespace

CameraPath standard_trajectory(TrajectoryKind kind, int frames, double step) {
    if (frames < 2)
        throw DomainError("standard_trajectory: needs at least 2 frames, got " +
                          std::to_string(frames));
    if (!(step > 0.0) || !std::isfinite(step))
        throw DomainError("standard_trajectory: step must be finite and > 0");

    CameraPath path;
    path.positions.reserve(static_cast<std::size_t>(frames));

    const auto line = [&](const Vec3& dir) {
        for (int k = 0; k < frames; ++k) path.positions.push_back(dir * (step * k));
    };

    switch (kind) {
    case TrajectoryKind::forward: line({0.0, 0.0, 1.0}); break;
    case TrajectoryKind::backward: line({0.0, 0.0, -1.0}); break;
    case TrajectoryKind::left: line({-1.0, 0.0, 0.0}); break;
    case TrajectoryKind::right: line({1.0, 0.0, 0.0}); break;
    case TrajectoryKind::s_curve: {
        const std::vector<Vec3> unit = s_curve_chords(frames - 1);
        const double chord = (unit[1] - unit[0]).norm();
        const double sigma = step / chord;
        for (const Vec3& p : unit) path.positions.push_back(p * sigma);
        break;
    }
    case TrajectoryKind::loop: {
        // Circle through the origin; equal central angles give exactly equal
        // chords, and frame f-1 returns to frame 0. Fewer than 4 frames has
        // no non-degenerate closed polygon.
        if (frames < 4)
            throw DomainError("standard_trajectory: loop needs at least 4 frames, got " +
                              std::to_string(frames));
        const double alpha = kTwoPi / (frames - 1);
        const double radius = step / (2.0 * std::sin(0.5 * alpha));
        for (int k = 0; k < frames; ++k) {
            const double a = alpha * k;
            path.positions.push_back(
                {radius * (1.0 - std::cos(a)), 0.0, radius * std::sin(a)});
        }
        break;
    }
    }
    return path;
}

void save_trajectory_jsonl(const CameraPath& path, std::ostream& out) {
    for (int k = 0; k < path.frames(); ++k) {
        nlohmann::json line;
        line["frame"] = k;
        line["x"] = path.positions[static_cast<std::size_t>(k)].x;
        line["y"] = path.positions[static_cast<std::size_t>(k)].y;
        line["z"] = path.positions[static_cast<std::size_t>(k)].z;
        out << line.dump() << '\n';
    }
}

void save_trajectory_jsonl(const CameraPath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    save_trajectory_jsonl(path, out);
    if (!out) throw Error("write failed for '" + file + "'");
}

CameraPath load_trajectory_jsonl(std::istream& in) {
    CameraPath path;
    std::string line;
    std::size_t offset = 0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("trajectory manifest line " + std::to_string(line_no) +
                                 ": " + e.what(),
                             line_start + (e.byte > 0 ? e.byte - 1 : 0));
        }
        if (!row.is_object() || !row.contains("frame") || !row.contains("x") ||
            !row.contains("y") || !row.contains("z"))
            throw ParseError("trajectory manifest line " + std::to_string(line_no) +
                                 ": expected keys frame, x, y, z",
                             line_start);
        if (!row["frame"].is_number_integer())
            throw ParseError("trajectory manifest line " + std::to_string(line_no) +
                                 ": frame must be an integer",
                             line_start);

        const int frame = row["frame"].get<int>();
        if (frame != path.frames())
            throw ValidationError("trajectory manifest line " + std::to_string(line_no) +
                                  ": frame index " + std::to_string(frame) +
                                  " out of order (expected " + std::to_string(path.frames()) +
                                  ")");
        path.positions.push_back(
            {row["x"].get<double>(), row["y"].get<double>(), row["z"].get<double>()});
    }
    if (path.frames() == 0) throw ParseError("trajectory manifest is empty", 0);
    return path;
}

CameraPath load_trajectory_jsonl(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");
    return load_trajectory_jsonl(in);
}

void save_flow_scale_json(const FlowScale& fs, const std::string& file) {
    nlohmann::json doc;
    doc["reference_step"] = fs.reference_step;
    doc["scale"] = fs.scale;
    auto& flow = doc["flow"] = nlohmann::json::array();
    for (const Vec3& d : fs.flow) flow.push_back({d.x, d.y, d.z});

    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + file + "'");
}

FlowScale load_flow_scale_json(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open '" + file + "' for reading");

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("flow-scale file '" + file + "': " + e.what(),
                         e.byte > 0 ? e.byte - 1 : 0);
    }
    if (!doc.is_object() || !doc.contains("reference_step") || !doc.contains("scale") ||
        !doc.contains("flow") || !doc["flow"].is_array())
        throw ParseError("flow-scale file '" + file +
                             "': expected keys reference_step, scale, flow[]",
                         0);

    FlowScale fs;
    fs.reference_step = doc["reference_step"].get<double>();
    fs.scale = doc["scale"].get<double>();
    for (const auto& row : doc["flow"]) {
        if (!row.is_array() || row.size() != 3)
            throw ParseError("flow-scale file '" + file + "': flow entries must be [x, y, z]",
                             0);
        fs.flow.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
    }
    if (fs.flow.empty())
        throw ValidationError("flow-scale file '" + file + "': flow is empty");
    for (std::size_t k = 0; k < fs.flow.size(); ++k) {
        if (std::abs(fs.flow[k].norm() - 1.0) > 1e-6)
            throw ValidationError("flow-scale file '" + file + "': flow[" +
                                  std::to_string(k) + "] is not a unit vector");
    }
    return fs;
}

} // namespace panoloom

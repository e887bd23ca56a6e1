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

#include "panoloom/trajectory_synthesis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "panoloom/errors.hpp"
#include "panoloom/rng.hpp"

namespace panoloom {

OccupancyGrid::OccupancyGrid(int nx_, int nz_, double resolution_) {
    if (nx_ < 1 || nz_ < 1) throw DomainError("occupancy grid dimensions must be >= 1");
    if (!(resolution_ > 0.0)) throw DomainError("occupancy grid resolution must be > 0");
    nx = nx_;
    nz = nz_;
    resolution = resolution_;
    cells.assign(static_cast<std::size_t>(nx) * nz, 0);
}

std::size_t OccupancyGrid::free_count() const {
    std::size_t n = 0;
    for (std::uint8_t c : cells) n += c == 0;
    return n;
}

Vec3 OccupancyGrid::cell_center(const GridCell& c) const {
    return {origin.x + (c.x + 0.5) * resolution, origin.y + 0.5 * (band.lo + band.hi),
            origin.z + (c.z + 0.5) * resolution};
}

OccupancyGrid extract_free_space(const std::vector<Vec3>& samples, const HeightBand& band,
                                 const Vec3& origin, double resolution, int nx, int nz) {
    if (samples.empty()) throw DomainError("extract_free_space: no input samples");
    if (!(band.lo < band.hi))
        throw DomainError("extract_free_space: band lo must be < band hi");

    OccupancyGrid grid(nx, nz, resolution);
    grid.origin = origin;
    grid.band = band;
    for (const Vec3& s : samples) {
        if (s.y < band.lo || s.y > band.hi) continue;
        const GridCell c{static_cast<int>(std::floor((s.x - origin.x) / resolution)),
                         static_cast<int>(std::floor((s.z - origin.z) / resolution))};
        if (grid.in_bounds(c)) grid.set_obstacle(c);
    }
    return grid;
}

namespace {

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDz[8] = {0, 0, 1, -1, 1, -1, 1, -1};
const double kSqrt2 = std::sqrt(2.0);

// Diagonal moves may not cut corners: both orthogonal side cells must be
// free, keeping routing consistent with the supercover collision rule.
bool step_allowed(const OccupancyGrid& grid, const GridCell& from, int dir) {
    const GridCell to{from.x + kDx[dir], from.z + kDz[dir]};
    if (!grid.free_cell(to)) return false;
    if (dir >= 4)
        return grid.free_cell({from.x + kDx[dir], from.z}) &&
               grid.free_cell({from.x, from.z + kDz[dir]});
    return true;
}

std::size_t idx(const OccupancyGrid& grid, const GridCell& c) {
    return static_cast<std::size_t>(c.z) * grid.nx + c.x;
}

// Multi-source BFS step counts over free cells (diagonals count one step).
std::vector<int> bfs_distances(const OccupancyGrid& grid, const std::vector<GridCell>& sources) {
    std::vector<int> dist(static_cast<std::size_t>(grid.nx) * grid.nz, -1);
    std::deque<GridCell> queue;
    for (const GridCell& s : sources) {
        if (!grid.free_cell(s)) continue;
        if (dist[idx(grid, s)] == 0) continue;
        dist[idx(grid, s)] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const GridCell c = queue.front();
        queue.pop_front();
        for (int d = 0; d < 8; ++d) {
            if (!step_allowed(grid, c, d)) continue;
            const GridCell n{c.x + kDx[d], c.z + kDz[d]};
            if (dist[idx(grid, n)] >= 0) continue;
            dist[idx(grid, n)] = dist[idx(grid, c)] + 1;
            queue.push_back(n);
        }
    }
    return dist;
}

void mark_covered(const OccupancyGrid& grid, const GridCell& w, int radius,
                  std::vector<std::uint8_t>& covered, std::size_t& covered_count) {
    for (int z = std::max(0, w.z - radius); z <= std::min(grid.nz - 1, w.z + radius); ++z)
        for (int x = std::max(0, w.x - radius); x <= std::min(grid.nx - 1, w.x + radius); ++x) {
            const GridCell c{x, z};
            const std::size_t i = idx(grid, c);
            if (!grid.obstacle(c) && !covered[i]) {
                covered[i] = 1;
                ++covered_count;
            }
        }
}

} // namespace

double coverage_fraction(const OccupancyGrid& grid, const std::vector<GridCell>& cells,
                         int radius_cells) {
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(grid.nx) * grid.nz, 0);
    std::size_t covered_count = 0;
    for (const GridCell& c : cells) mark_covered(grid, c, radius_cells, covered, covered_count);
    const std::size_t free_total = grid.free_count();
    if (free_total == 0) throw DomainError("coverage_fraction: grid has no free cells");
    return static_cast<double>(covered_count) / static_cast<double>(free_total);
}

WaypointPlan plan_waypoints(const OccupancyGrid& grid, double target_coverage,
                            double coverage_radius_m, std::uint64_t seed) {
    if (!(target_coverage > 0.0 && target_coverage <= 1.0))
        throw DomainError("plan_waypoints: target coverage must be in (0, 1]");
    if (!(coverage_radius_m >= 0.0))
        throw DomainError("plan_waypoints: coverage radius must be >= 0");
    const std::size_t free_total = grid.free_count();
    if (free_total == 0) throw DomainError("plan_waypoints: grid has no free cells");

    const int radius = static_cast<int>(std::floor(coverage_radius_m / grid.resolution + 1e-9));

    WaypointPlan plan;
    plan.coverage_radius_cells = radius;

    // Seed waypoint: a seeded pick among the free cells of maximal coverage
    // gain, so the walk starts in the thick of the free space.
    std::size_t best_gain = 0;
    std::vector<GridCell> best_cells;
    for (int z = 0; z < grid.nz; ++z)
        for (int x = 0; x < grid.nx; ++x) {
            const GridCell c{x, z};
            if (!grid.free_cell(c)) continue;
            std::size_t gain = 0;
            for (int zz = std::max(0, z - radius); zz <= std::min(grid.nz - 1, z + radius); ++zz)
                for (int xx = std::max(0, x - radius); xx <= std::min(grid.nx - 1, x + radius);
                     ++xx)
                    gain += grid.free_cell({xx, zz});
            if (gain > best_gain) {
                best_gain = gain;
                best_cells.clear();
            }
            if (gain == best_gain) best_cells.push_back(c);
        }
    Rng rng(seed);
    const GridCell first =
        best_cells[static_cast<std::size_t>(rng.uniform_below(best_cells.size()))];

    std::vector<std::uint8_t> covered(static_cast<std::size_t>(grid.nx) * grid.nz, 0);
    std::size_t covered_count = 0;
    plan.waypoints.push_back(first);
    mark_covered(grid, first, radius, covered, covered_count);

    const double target_cells = target_coverage * static_cast<double>(free_total);
    while (static_cast<double>(covered_count) + 1e-9 < target_cells) {
        const std::vector<int> dist = bfs_distances(grid, plan.waypoints);
        GridCell best{-1, -1};
        int best_dist = -1;
        for (int z = 0; z < grid.nz; ++z)
            for (int x = 0; x < grid.nx; ++x) {
                const GridCell c{x, z};
                const std::size_t i = idx(grid, c);
                if (grid.obstacle(c) || covered[i] || dist[i] < 0) continue;
                if (dist[i] > best_dist || (dist[i] == best_dist && c < best)) {
                    best = c;
                    best_dist = dist[i];
                }
            }
        if (best_dist < 0) { // every reachable free cell is already covered
            plan.incomplete = true;
            break;
        }
        plan.waypoints.push_back(best);
        mark_covered(grid, best, radius, covered, covered_count);
    }

    plan.covered_fraction = static_cast<double>(covered_count) / static_cast<double>(free_total);
    return plan;
}

namespace {

struct AStarNode {
    double f;
    GridCell cell;

    bool operator<(const AStarNode& o) const {
        if (f != o.f) return f < o.f;
        return cell < o.cell;
    }
};

double octile(const GridCell& a, const GridCell& b) {
    const int dx = std::abs(a.x - b.x);
    const int dz = std::abs(a.z - b.z);
    return std::max(dx, dz) + (kSqrt2 - 1.0) * std::min(dx, dz);
}

std::vector<GridCell> astar(const OccupancyGrid& grid, const GridCell& start,
                            const GridCell& goal, int leg_from, int leg_to) {
    const auto fail = [&]() -> RoutingError {
        std::ostringstream msg;
        msg << "route_and_resample: waypoints " << leg_from << " (" << start.x << "," << start.z
            << ") and " << leg_to << " (" << goal.x << "," << goal.z
            << ") are not connected in free space";
        return RoutingError(msg.str(), leg_from, leg_to);
    };
    if (!grid.free_cell(start) || !grid.free_cell(goal)) throw fail();

    const std::size_t total = static_cast<std::size_t>(grid.nx) * grid.nz;
    std::vector<double> g(total, std::numeric_limits<double>::infinity());
    std::vector<std::int32_t> parent(total, -1);
    std::vector<std::uint8_t> closed(total, 0);
    std::set<AStarNode> open;

    g[idx(grid, start)] = 0.0;
    open.insert({octile(start, goal), start});

    while (!open.empty()) {
        const AStarNode node = *open.begin();
        open.erase(open.begin());
        const GridCell c = node.cell;
        const std::size_t ci = idx(grid, c);
        if (closed[ci]) continue;
        closed[ci] = 1;
        if (c == goal) break;

        for (int d = 0; d < 8; ++d) {
            if (!step_allowed(grid, c, d)) continue;
            const GridCell n{c.x + kDx[d], c.z + kDz[d]};
            const std::size_t ni = idx(grid, n);
            if (closed[ni]) continue;
            const double cand = g[ci] + (d >= 4 ? kSqrt2 : 1.0);
            if (cand < g[ni]) {
                if (std::isfinite(g[ni])) open.erase({g[ni] + octile(n, goal), n});
                g[ni] = cand;
                parent[ni] = static_cast<std::int32_t>(ci);
                open.insert({cand + octile(n, goal), n});
            }
        }
    }
    if (!closed[idx(grid, goal)]) throw fail();

    std::vector<GridCell> path;
    for (std::size_t i = idx(grid, goal);;) {
        path.push_back({static_cast<int>(i % grid.nx), static_cast<int>(i / grid.nx)});
        if (parent[i] < 0) break;
        i = static_cast<std::size_t>(parent[i]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

// Every cell whose closed square the segment (in cell-center coordinates)
// touches must be free; lattice-corner crossings count all four neighbors.
bool line_of_sight(const OccupancyGrid& grid, const GridCell& a, const GridCell& b) {
    const double x0 = a.x + 0.5, z0 = a.z + 0.5;
    const double x1 = b.x + 0.5, z1 = b.z + 0.5;
    const double dx = x1 - x0, dz = z1 - z0;

    std::vector<double> ts{0.0, 1.0};
    if (dx != 0.0) {
        const int lo = static_cast<int>(std::ceil(std::min(x0, x1)));
        const int hi = static_cast<int>(std::floor(std::max(x0, x1)));
        for (int gx = lo; gx <= hi; ++gx) {
            const double t = (gx - x0) / dx;
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    if (dz != 0.0) {
        const int lo = static_cast<int>(std::ceil(std::min(z0, z1)));
        const int hi = static_cast<int>(std::floor(std::max(z0, z1)));
        for (int gz = lo; gz <= hi; ++gz) {
            const double t = (gz - z0) / dz;
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());

    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] < 1e-12) continue;
        const double tm = 0.5 * (ts[i] + ts[i + 1]);
        const GridCell c{static_cast<int>(std::floor(x0 + tm * dx)),
                         static_cast<int>(std::floor(z0 + tm * dz))};
        if (!grid.free_cell(c)) return false;
    }
    // Lattice corners pierced by the segment touch four cells at a point.
    for (double t : ts) {
        if (t <= 0.0 || t >= 1.0) continue;
        const double px = x0 + t * dx;
        const double pz = z0 + t * dz;
        const double rx = px - std::round(px);
        const double rz = pz - std::round(pz);
        if (std::abs(rx) < 1e-9 && std::abs(rz) < 1e-9) {
            const int cx = static_cast<int>(std::llround(px));
            const int cz = static_cast<int>(std::llround(pz));
            if (!grid.free_cell({cx - 1, cz - 1}) || !grid.free_cell({cx, cz - 1}) ||
                !grid.free_cell({cx - 1, cz}) || !grid.free_cell({cx, cz}))
                return false;
        }
    }
    return true;
}

std::vector<GridCell> shortcut(const OccupancyGrid& grid, const std::vector<GridCell>& path) {
    if (path.size() <= 2) return path;
    std::vector<GridCell> out{path.front()};
    std::size_t i = 0;
    while (i + 1 < path.size()) {
        std::size_t j = path.size() - 1;
        while (j > i + 1 && !line_of_sight(grid, path[i], path[j])) --j;
        out.push_back(path[j]);
        i = j;
    }
    return out;
}

struct PolyPos {
    std::size_t seg = 0; // index into points: segment [seg, seg+1]
    Vec3 point;
};

// First polyline point at Euclidean distance `chord` from pos.point, walking
// forward. Exact per-segment quadratic, no tolerance accumulation.
bool march_chord(const std::vector<Vec3>& pts, PolyPos& pos, double chord) {
    for (std::size_t s = pos.seg; s + 1 < pts.size(); ++s) {
        const Vec3& a = s == pos.seg ? pos.point : pts[s];
        const Vec3 d = pts[s + 1] - a;
        const Vec3 m = a - pos.point;
        const double qa = d.dot(d);
        if (qa == 0.0) continue;
        const double qb = 2.0 * m.dot(d);
        const double qc = m.dot(m) - chord * chord;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) continue;
        const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
        if (t >= 0.0 && t <= 1.0) {
            pos.point = a + d * t;
            // Re-anchor on the original segment parameterization.
            pos.seg = s;
            return true;
        }
    }
    return false; // polyline ends before the chord completes
}

} // namespace

CameraPath route_and_resample(const OccupancyGrid& grid, const WaypointPlan& plan,
                              double step_m) {
    if (plan.waypoints.empty())
        throw DomainError("route_and_resample: plan has no waypoints");
    if (!(step_m > 0.0) || !std::isfinite(step_m))
        throw DomainError("route_and_resample: step must be finite and > 0");

    CameraPath path;
    if (plan.waypoints.size() == 1) {
        path.positions.push_back(grid.cell_center(plan.waypoints.front()));
        return path;
    }

    std::vector<GridCell> cells{plan.waypoints.front()};
    for (std::size_t i = 0; i + 1 < plan.waypoints.size(); ++i) {
        const std::vector<GridCell> leg =
            astar(grid, plan.waypoints[i], plan.waypoints[i + 1], static_cast<int>(i),
                  static_cast<int>(i + 1));
        cells.insert(cells.end(), leg.begin() + 1, leg.end());
    }
    const std::vector<GridCell> simple = shortcut(grid, cells);

    std::vector<Vec3> pts;
    pts.reserve(simple.size());
    for (const GridCell& c : simple) pts.push_back(grid.cell_center(c));

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += (pts[i + 1] - pts[i]).norm();
    if (total == 0.0) {
        path.positions.push_back(pts.front());
        return path;
    }

    const long long n_steps = std::max<long long>(1, std::llround(total / step_m));

    // The polyline bends, so equal *chords* are slightly shorter than equal
    // arcs; bisect the common chord length until n_steps chords land exactly
    // on the endpoint. That is what keeps validate_uniform under 1e-6.
    const auto walk = [&](double chord, std::vector<Vec3>* out) {
        PolyPos pos{0, pts.front()};
        if (out) out->assign(1, pos.point);
        for (long long k = 0; k < n_steps; ++k) {
            if (!march_chord(pts, pos, chord)) return false; // ran past the end
            if (out) out->push_back(pos.point);
        }
        return true; // all chords placed; end reached iff nothing remains
    };
    const auto undershoots = [&](double chord) {
        PolyPos pos{0, pts.front()};
        for (long long k = 0; k < n_steps; ++k)
            if (!march_chord(pts, pos, chord)) return false;
        return (pts.back() - pos.point).norm() > 0.0;
    };

    double hi = total / static_cast<double>(n_steps); // consumes >= total: never undershoots
    double lo = hi;
    for (int i = 0; i < 64 && !undershoots(lo); ++i) lo *= 0.5;
    if (undershoots(lo)) {
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (undershoots(mid) ? lo : hi) = mid;
        }
    }

    std::vector<Vec3> samples;
    if (!walk(hi, &samples)) {
        // A fold in the polyline makes the chord-to-arc map jump, so no common
        // chord lands exactly on the endpoint. March what fits; close with the
        // endpoint only when it sits a full step away (folds leave it nearer,
        // and a runt closing step would break the uniform-velocity contract).
        PolyPos pos{0, pts.front()};
        samples.assign(1, pos.point);
        for (long long k = 0; k < n_steps; ++k) {
            if (!march_chord(pts, pos, hi)) break;
            samples.push_back(pos.point);
        }
        if ((pts.back() - pos.point).norm() >= hi * (1.0 - 1e-9))
            samples.push_back(pts.back());
    } else {
        samples.back() = pts.back();
    }

    path.positions = std::move(samples);
    return path;
}

void write_grid_pgm(const OccupancyGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    char meta[256];
    std::snprintf(meta, sizeof(meta),
                  "# panoloom res=%.17g ox=%.17g oy=%.17g oz=%.17g band=%.17g,%.17g\n",
                  grid.resolution, grid.origin.x, grid.origin.y, grid.origin.z, grid.band.lo,
                  grid.band.hi);
    out << "P5\n" << meta << grid.nx << ' ' << grid.nz << "\n255\n";
    for (std::uint8_t c : grid.cells) out.put(c ? '\0' : static_cast<char>(255));
    if (!out) throw Error("write failed for '" + path + "'");
}

OccupancyGrid read_grid_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");

    std::string magic;
    in >> magic;
    if (magic != "P5") throw ParseError("grid file '" + path + "': expected P5 PGM", 0);

    double res = 0.1, ox = 0, oy = 0, oz = 0, blo = 1.3, bhi = 1.5;
    const auto skip_ws_and_comments = [&]() {
        while (true) {
            const int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
                std::sscanf(line.c_str(), "# panoloom res=%lg ox=%lg oy=%lg oz=%lg band=%lg,%lg",
                            &res, &ox, &oy, &oz, &blo, &bhi);
            } else if (c != EOF && std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
    };

    int nx = 0, nz = 0, maxval = 0;
    skip_ws_and_comments();
    in >> nx;
    skip_ws_and_comments();
    in >> nz;
    skip_ws_and_comments();
    in >> maxval;
    if (!in || nx < 1 || nz < 1 || maxval < 1 || maxval > 255)
        throw ParseError("grid file '" + path + "': malformed PGM header", 0);
    in.get(); // single whitespace byte after maxval

    OccupancyGrid grid(nx, nz, res);
    grid.origin = {ox, oy, oz};
    grid.band = {blo, bhi};
    std::vector<char> raw(static_cast<std::size_t>(nx) * nz);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw ParseError("grid file '" + path + "': truncated pixel data",
                         static_cast<std::size_t>(in.tellg()));
    for (std::size_t i = 0; i < raw.size(); ++i)
        grid.cells[i] = static_cast<unsigned char>(raw[i]) < 128 ? 1 : 0;
    return grid;
}

} // namespace panoloom

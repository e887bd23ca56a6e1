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

#include "panoloom/trajectory.hpp"
#include "panoloom/vec3.hpp"

namespace panoloom {

// Camera height band in meters; obstacles are only those intersecting it.
struct HeightBand {
    double lo = 1.3;
    double hi = 1.5;
};

struct GridCell {
    int x = 0;
    int z = 0;

    bool operator==(const GridCell& o) const { return x == o.x && z == o.z; }
    // Lexicographic (x, then z); the planner's deterministic tie-break order.
    bool operator<(const GridCell& o) const { return x != o.x ? x < o.x : z < o.z; }
};

// 2D boolean obstacle map over the x/z ground plane (y is up). Cell (0, 0)
// spans world x in [origin.x, origin.x + resolution), likewise for z; camera
// positions sit at cell centers at y = origin.y + band midpoint.
struct OccupancyGrid {
    double resolution = 0.1; // meters per cell
    Vec3 origin;
    int nx = 0;
    int nz = 0;
    HeightBand band;
    std::vector<std::uint8_t> cells; // 1 = obstacle; index = z * nx + x

    OccupancyGrid() = default;
    OccupancyGrid(int nx_, int nz_, double resolution_ = 0.1);

    bool in_bounds(const GridCell& c) const {
        return c.x >= 0 && c.x < nx && c.z >= 0 && c.z < nz;
    }
    bool obstacle(const GridCell& c) const {
        return cells[static_cast<std::size_t>(c.z) * nx + c.x] != 0;
    }
    bool free_cell(const GridCell& c) const { return in_bounds(c) && !obstacle(c); }
    void set_obstacle(const GridCell& c, bool value = true) {
        cells[static_cast<std::size_t>(c.z) * nx + c.x] = value ? 1 : 0;
    }
    std::size_t free_count() const;
    Vec3 cell_center(const GridCell& c) const;
};

// Rasters point samples into the grid: a cell becomes an obstacle iff any
// sample with y inside the band lands in it.
OccupancyGrid extract_free_space(const std::vector<Vec3>& samples, const HeightBand& band,
                                 const Vec3& origin, double resolution, int nx, int nz);

struct WaypointPlan {
    std::vector<GridCell> waypoints;
    double covered_fraction = 0.0;
    int coverage_radius_cells = 0;
    bool incomplete = false; // target unreachable from the seeded start region
};

// Greedy farthest-point insertion: the seed picks the first waypoint among
// the maximum-coverage free cells, then each next waypoint is the uncovered
// reachable cell geodesically farthest from the chosen set (ties broken by
// cell order). Coverage = free cells within Chebyshev radius of a waypoint.
WaypointPlan plan_waypoints(const OccupancyGrid& grid, double target_coverage,
                            double coverage_radius_m, std::uint64_t seed);

// Independent recount used by audits: fraction of free cells within Chebyshev
// `radius_cells` of any of `cells`.
double coverage_fraction(const OccupancyGrid& grid, const std::vector<GridCell>& cells,
                         int radius_cells);

// A* shortest 8-connected route between consecutive waypoints (diagonal step
// cost sqrt(2), no corner cutting), chord-shortcut smoothed, then resampled
// to exactly equal steps of ~`step_m` (adjusted so a whole number of steps
// spans the route). Every output position stays in free space.
CameraPath route_and_resample(const OccupancyGrid& grid, const WaypointPlan& plan,
                              double step_m);

// PGM (P5) occupancy: 0 = obstacle (black), 255 = free; values < 128 load as
// obstacles. Resolution/band/origin ride in a comment line.
void write_grid_pgm(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid read_grid_pgm(const std::string& path);

} // namespace panoloom

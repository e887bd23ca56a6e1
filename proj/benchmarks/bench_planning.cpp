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

#include <benchmark/benchmark.h>

#include <panoloom/rng.hpp>
#include <panoloom/trajectory_synthesis.hpp>

namespace {

using namespace panoloom;

OccupancyGrid scattered_grid(int side, int obstacle_percent, std::uint64_t seed) {
    OccupancyGrid grid(side, side, 0.2);
    Rng rng(seed);
    for (int z = 0; z < side; ++z)
        for (int x = 0; x < side; ++x)
            if (rng.uniform_below(100) < static_cast<std::uint64_t>(obstacle_percent))
                grid.set_obstacle({x, z});
    return grid;
}

void BM_PlanWaypoints(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const OccupancyGrid grid = scattered_grid(side, 12, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(plan_waypoints(grid, 0.8, 0.6, 7));
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_PlanWaypoints)->Arg(30)->Arg(60)->Arg(120);

void BM_RouteAndResample(benchmark::State& state) {
    const OccupancyGrid grid = scattered_grid(60, 12, 7);
    const WaypointPlan plan = plan_waypoints(grid, 0.8, 0.6, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(route_and_resample(grid, plan, 0.1));
}
BENCHMARK(BM_RouteAndResample);

void BM_CoverageFraction(benchmark::State& state) {
    const OccupancyGrid grid = scattered_grid(60, 12, 7);
    const WaypointPlan plan = plan_waypoints(grid, 0.8, 0.6, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            coverage_fraction(grid, plan.waypoints, plan.coverage_radius_cells));
}
BENCHMARK(BM_CoverageFraction);

} // namespace

BENCHMARK_MAIN();

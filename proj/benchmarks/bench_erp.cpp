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

#include <panoloom/erp_geometry.hpp>
#include <panoloom/image.hpp>
#include <panoloom/rng.hpp>
#include <panoloom/scene_oracle.hpp>

namespace {

using namespace panoloom;

ErpFrame noise_frame(int width, int height) {
    ErpFrame frame = make_erp_frame(width, height);
    Rng rng(1);
    for (std::uint8_t& b : frame.rgb) b = static_cast<std::uint8_t>(rng.uniform_below(256));
    return frame;
}

void BM_PixelToRay(benchmark::State& state) {
    const int w = 1920, h = 960;
    double v = 0.5;
    for (auto _ : state) {
        for (int x = 0; x < w; ++x)
            benchmark::DoNotOptimize(pixel_to_ray(x + 0.5, v, w, h));
        v += 1.0;
        if (v >= h) v = 0.5;
    }
    state.SetItemsProcessed(state.iterations() * w);
}
BENCHMARK(BM_PixelToRay);

void BM_YawRotateFractional(benchmark::State& state) {
    const ErpFrame frame = noise_frame(960, 480);
    for (auto _ : state)
        benchmark::DoNotOptimize(yaw_rotate(frame, 0.1234));
    state.SetItemsProcessed(state.iterations() * frame.width * frame.height);
}
BENCHMARK(BM_YawRotateFractional);

void BM_YawRotateColumns(benchmark::State& state) {
    const ErpFrame frame = noise_frame(960, 480);
    const double dphi = 2.0 * 3.14159265358979323846 * 64.0 / 960.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(yaw_rotate(frame, dphi));
    state.SetItemsProcessed(state.iterations() * frame.width * frame.height);
}
BENCHMARK(BM_YawRotateColumns);

void BM_FiveCropSet(benchmark::State& state) {
    const ErpFrame frame = noise_frame(512, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(five_crop_set(frame));
    state.SetItemsProcessed(state.iterations() * 5 * 512 * 512);
}
BENCHMARK(BM_FiveCropSet);

void BM_RenderErp(benchmark::State& state) {
    const ProceduralScene scene = make_default_scene(0);
    const int h = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(render_erp(scene, Vec3{0.0, 1.5, 0.0}, 2 * h, h));
    state.SetItemsProcessed(state.iterations() * 2 * h * h);
}
BENCHMARK(BM_RenderErp)->Arg(64)->Arg(128)->Arg(240);

} // namespace

BENCHMARK_MAIN();

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

#include <vector>

#include <panoloom/image.hpp>
#include <panoloom/metrics.hpp>
#include <panoloom/rng.hpp>

namespace {

using namespace panoloom;

Image noise_image(int width, int height, std::uint64_t seed) {
    Image img(width, height);
    Rng rng(seed);
    for (std::uint8_t& b : img.rgb) b = static_cast<std::uint8_t>(rng.uniform_below(256));
    return img;
}

FeatureSequence noise_features(std::size_t rows, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> data(rows * dim);
    for (double& v : data) v = rng.uniform01() + 0.05;
    return FeatureSequence(std::move(data), rows, dim, "bench");
}

void BM_Psnr(benchmark::State& state) {
    const Image a = noise_image(480, 240, 1);
    const Image b = noise_image(480, 240, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(psnr(a, b));
    state.SetItemsProcessed(state.iterations() * a.width * a.height);
}
BENCHMARK(BM_Psnr);

void BM_Ssim(benchmark::State& state) {
    const Image a = noise_image(480, 240, 1);
    const Image b = noise_image(480, 240, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(ssim(a, b));
    state.SetItemsProcessed(state.iterations() * a.width * a.height);
}
BENCHMARK(BM_Ssim);

void BM_RawPixelFeatures(benchmark::State& state) {
    std::vector<Image> frames;
    for (std::uint64_t i = 0; i < 16; ++i) frames.push_back(noise_image(480, 240, i));
    for (auto _ : state)
        benchmark::DoNotOptimize(raw_pixel_features(frames));
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_RawPixelFeatures);

void BM_DctLowfreqFeatures(benchmark::State& state) {
    std::vector<Image> frames;
    for (std::uint64_t i = 0; i < 16; ++i) frames.push_back(noise_image(240, 120, i));
    for (auto _ : state)
        benchmark::DoNotOptimize(dct_lowfreq_features(frames));
    state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_DctLowfreqFeatures);

void BM_LoopConsistency(benchmark::State& state) {
    const FeatureSequence feats = noise_features(81, 512, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(loop_consistency(feats, 5));
}
BENCHMARK(BM_LoopConsistency);

void BM_FrechetDistance(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const FeatureSequence a = noise_features(256, dim, 4);
    const FeatureSequence b = noise_features(256, dim, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(frechet_distance(a, b));
}
BENCHMARK(BM_FrechetDistance)->Arg(16)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();

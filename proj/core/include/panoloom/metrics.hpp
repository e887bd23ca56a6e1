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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "panoloom/image.hpp"

namespace panoloom {

// Per-frame embedding rows. Construction validates shape, finiteness and
// rejects zero-norm rows (cosine similarity would be undefined).
class FeatureSequence {
public:
    FeatureSequence(std::vector<double> data, std::size_t rows, std::size_t dim,
                    std::string provider_id);

    std::size_t rows() const { return rows_; }
    std::size_t dim() const { return dim_; }
    const std::string& provider_id() const { return provider_id_; }
    const double* row(std::size_t r) const { return data_.data() + r * dim_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::vector<double> data_; // rows_ x dim_, row-major
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::string provider_id_;
};

double cosine_similarity(const double* a, const double* b, std::size_t dim);

struct LoopScores {
    double s1 = 0.0;     // loop closure score
    double s2 = 0.0;     // intermediate score
    double c_loop = 0.0; // (1 - s2) / (1 - s1); NaN when degenerate
    int p = 5;           // buffer size
    bool degenerate = false; // 1 - s1 below epsilon: perfect closure, no ratio
};

// Eq. indices are 1-based frames; row 0 here is frame 1. Requires f > 2P.
LoopScores loop_consistency(const FeatureSequence& feats, int P = 5, double eps = 1e-6);

// Sim(frame 1, frame q) for q = 1..f; element 0 is exactly 1.0.
std::vector<double> similarity_curve(const FeatureSequence& feats);

// Inclusive frame windows [lo, hi]; per-frame PSNR over RGB with MAX = 255,
// averaged per window. Identical content reports `cap` decibels.
std::vector<double> psnr_windows(const std::vector<Image>& gen, const std::vector<Image>& ref,
                                 const std::vector<std::pair<int, int>>& windows,
                                 double cap = 100.0);

double psnr(const Image& gen, const Image& ref, double cap = 100.0);

std::vector<std::pair<int, int>> default_psnr_windows();

// Mean SSIM over the valid (un-padded) region; 11x11 Gaussian window with
// sigma 1.5 (shrunk to the largest odd size that fits small inputs),
// K1 = 0.01, K2 = 0.03, L = 255, on Rec. 601 luma.
double ssim(const Image& gen, const Image& ref);

struct FrechetOptions {
    // Added to every covariance diagonal entry; > 0 lifts the n >= d + 1
    // sample requirement down to n >= 2.
    double shrinkage = 0.0;
};

double frechet_distance(const FeatureSequence& a, const FeatureSequence& b,
                        const FrechetOptions& opts = {});

// Built-in embedding providers. External neural features arrive as files.
FeatureSequence raw_pixel_features(const std::vector<Image>& frames);
FeatureSequence dct_lowfreq_features(const std::vector<Image>& frames);

// Feature file: magic "FSEQ", u32 rows, u32 dim, little-endian f32 row-major.
FeatureSequence read_fseq(const std::string& path);
void write_fseq(const FeatureSequence& feats, const std::string& path);

// Deterministic pairwise (tree) summation; order-independent accumulation
// helper shared by the metric implementations.
double pairwise_sum(const double* values, std::size_t count);
double pairwise_sum(const std::vector<double>& values);

} // namespace panoloom

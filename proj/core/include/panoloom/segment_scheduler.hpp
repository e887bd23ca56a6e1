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

#include "panoloom/errors.hpp"
#include "panoloom/image.hpp"

namespace panoloom {

// Deterministic bookkeeping for the two-stage preview/refine pipeline:
// how many refine segments a preview at scale s expands into, which preview
// frames each segment may see, and how those masks land in latent time.

struct SegmentPlan {
    double s = 1.0;       // preview scale
    double s_prime = 1.0; // target scale after refinement
    int f = 0;            // frames per clip
    int n = 0;            // segment count, ceil(s / s_prime)
    int w = 0;            // window size, ceil((f - 1) / n)
    int overlap = 0;      // frames shared between consecutive refined segments
    std::vector<int> j0;  // inference start index per segment, (i - 1) * w

    // Total refined length f + (n - 1) * (f - overlap).
    long long total_frames() const;
};

enum class MaskMode { inference, training };

struct VisibilityMask {
    int j0 = 0;
    int w = 0;
    std::vector<std::uint8_t> frame_mask; // length f, values 0/1
    std::vector<double> latent_mask;      // length f', average-pooled
};

struct LatentGrid {
    int f_prime = 0;
    int c = 0;
    int h = 0;
    int w_lat = 0;
    std::vector<float> values; // dense, index = ((t * c + ch) * h + y) * w_lat + x

    std::size_t slice_size() const {
        return static_cast<std::size_t>(c) * h * w_lat;
    }
};

// f' = 1 + ceil((f - 1) / T_c): the causal autoencoder keeps frame 0 alone
// and compresses the remainder in blocks of T_c.
int latent_frames(int f, int temporal_compression);

SegmentPlan plan_segments(double s, double s_prime, int f, int overlap = 1);

// i is 1-based (segment 1..n). Training mode draws j0 ~ U[0, f - w] from
// rng_seed; inference mode ignores the seed.
VisibilityMask build_mask(const SegmentPlan& plan, int i, MaskMode mode,
                          std::uint64_t rng_seed = 0, int temporal_compression = 4);

// Average-pool a per-frame mask to latent time with the first-frame-special
// grouping: slot 0 = frame 0, slot t >= 1 = mean over its block of T_c frames
// (last block may be short). Values stay fractional.
std::vector<double> pool_mask(const std::vector<std::uint8_t>& frame_mask,
                              int temporal_compression);

// z_p * m' broadcast over channel and space. Unmasked slices bit-identical.
LatentGrid mask_latent(const LatentGrid& z_p, const std::vector<double>& latent_mask);

// Joins refined segments dropping `overlap` leading frames of each subsequent
// segment. Element type is opaque; works on any per-frame payload.
template <typename Frame>
std::vector<Frame> concat_segments(const std::vector<std::vector<Frame>>& segments,
                                   int overlap) {
    if (segments.empty()) throw DomainError("concat_segments: no segments");
    const std::size_t f = segments.front().size();
    if (f < 1) throw DomainError("concat_segments: empty segment");
    if (overlap < 0 || static_cast<std::size_t>(overlap) >= f)
        throw DomainError("concat_segments: overlap must satisfy 0 <= overlap < f");
    for (const auto& seg : segments)
        if (seg.size() != f)
            throw DomainError("concat_segments: segments have differing lengths");

    std::vector<Frame> out = segments.front();
    out.reserve(f + (segments.size() - 1) * (f - static_cast<std::size_t>(overlap)));
    for (std::size_t i = 1; i < segments.size(); ++i)
        out.insert(out.end(), segments[i].begin() + overlap, segments[i].end());
    return out;
}

// Image overload adding the per-frame shape check.
std::vector<ErpFrame> concat_erp_segments(const std::vector<std::vector<ErpFrame>>& segments,
                                          int overlap);

// Plan + per-segment masks as JSON (frame masks run-length encoded).
void save_plan_json(const SegmentPlan& plan, int temporal_compression,
                    const std::string& file);

} // namespace panoloom

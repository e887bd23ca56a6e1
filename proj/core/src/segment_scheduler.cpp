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

#include "panoloom/segment_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "panoloom/errors.hpp"
#include "panoloom/rng.hpp"

namespace panoloom {

long long SegmentPlan::total_frames() const {
    return static_cast<long long>(f) +
           static_cast<long long>(n - 1) * (static_cast<long long>(f) - overlap);
}

int latent_frames(int f, int temporal_compression) {
    if (f < 1) throw DomainError("latent_frames: f must be >= 1");
    if (temporal_compression < 1)
        throw DomainError("latent_frames: temporal compression must be >= 1");
    return 1 + (f - 1 + temporal_compression - 1) / temporal_compression;
}

SegmentPlan plan_segments(double s, double s_prime, int f, int overlap) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("plan_segments: s must be > 0");
    if (!(s_prime > 0.0) || !std::isfinite(s_prime))
        throw DomainError("plan_segments: s' must be > 0");
    if (s < s_prime)
        throw DomainError("plan_segments: s < s' (refinement never compresses time)");
    if (f < 2) throw DomainError("plan_segments: f must be >= 2");
    if (overlap < 0 || overlap >= f)
        throw DomainError("plan_segments: overlap must satisfy 0 <= overlap < f");

    SegmentPlan plan;
    plan.s = s;
    plan.s_prime = s_prime;
    plan.f = f;
    plan.overlap = overlap;
    // Tiny slack so a ratio that is an integer up to rounding noise stays put.
    plan.n = static_cast<int>(std::ceil(s / s_prime - 1e-12));
    plan.n = std::max(plan.n, 1);
    plan.w = (f - 1 + plan.n - 1) / plan.n;
    plan.j0.resize(static_cast<std::size_t>(plan.n));
    for (int i = 1; i <= plan.n; ++i) plan.j0[static_cast<std::size_t>(i - 1)] = (i - 1) * plan.w;
    return plan;
}

std::vector<double> pool_mask(const std::vector<std::uint8_t>& frame_mask,
                              int temporal_compression) {
    if (frame_mask.empty()) throw DomainError("pool_mask: empty frame mask");
    if (temporal_compression < 1)
        throw DomainError("pool_mask: temporal compression must be >= 1");

    const int f = static_cast<int>(frame_mask.size());
    const int fp = latent_frames(f, temporal_compression);
    std::vector<double> latent(static_cast<std::size_t>(fp), 0.0);
    latent[0] = frame_mask[0];
    for (int t = 1; t < fp; ++t) {
        const int lo = 1 + (t - 1) * temporal_compression;
        const int hi = std::min(lo + temporal_compression, f);
        double sum = 0.0;
        for (int j = lo; j < hi; ++j) sum += frame_mask[static_cast<std::size_t>(j)];
        latent[static_cast<std::size_t>(t)] = sum / (hi - lo);
    }
    return latent;
}

VisibilityMask build_mask(const SegmentPlan& plan, int i, MaskMode mode,
                          std::uint64_t rng_seed, int temporal_compression) {
    if (i < 1 || i > plan.n)
        throw DomainError("build_mask: segment index " + std::to_string(i) +
                          " out of range 1.." + std::to_string(plan.n));

    VisibilityMask mask;
    mask.w = plan.w;
    if (mode == MaskMode::inference) {
        mask.j0 = plan.j0[static_cast<std::size_t>(i - 1)];
    } else {
        Rng rng(rng_seed);
        mask.j0 = static_cast<int>(rng.uniform_int(0, plan.f - plan.w));
    }

    mask.frame_mask.assign(static_cast<std::size_t>(plan.f), 0);
    const int hi = std::min(mask.j0 + mask.w, plan.f);
    for (int j = std::max(mask.j0, 0); j < hi; ++j)
        mask.frame_mask[static_cast<std::size_t>(j)] = 1;
    mask.latent_mask = pool_mask(mask.frame_mask, temporal_compression);
    return mask;
}

LatentGrid mask_latent(const LatentGrid& z_p, const std::vector<double>& latent_mask) {
    if (z_p.f_prime < 0 || z_p.c <= 0 || z_p.h <= 0 || z_p.w_lat <= 0)
        throw DomainError("mask_latent: latent grid has invalid shape");
    if (static_cast<std::size_t>(z_p.f_prime) != latent_mask.size())
        throw DomainError("mask_latent: mask length " + std::to_string(latent_mask.size()) +
                          " != latent frames " + std::to_string(z_p.f_prime));
    if (z_p.values.size() != static_cast<std::size_t>(z_p.f_prime) * z_p.slice_size())
        throw DomainError("mask_latent: values size does not match shape");
    for (double m : latent_mask)
        if (!std::isfinite(m)) throw DomainError("mask_latent: non-finite mask value");

    LatentGrid out = z_p;
    const std::size_t slice = z_p.slice_size();
    for (int t = 0; t < z_p.f_prime; ++t) {
        const float m = static_cast<float>(latent_mask[static_cast<std::size_t>(t)]);
        float* p = out.values.data() + static_cast<std::size_t>(t) * slice;
        for (std::size_t k = 0; k < slice; ++k) p[k] *= m;
    }
    return out;
}

std::vector<ErpFrame> concat_erp_segments(const std::vector<std::vector<ErpFrame>>& segments,
                                          int overlap) {
    if (!segments.empty() && !segments.front().empty()) {
        const ErpFrame& ref = segments.front().front();
        for (const auto& seg : segments)
            for (const ErpFrame& frame : seg)
                if (!frame.same_shape(ref))
                    throw DomainError("concat_segments: frames have differing dimensions");
    }
    return concat_segments(segments, overlap);
}

void save_plan_json(const SegmentPlan& plan, int temporal_compression,
                    const std::string& file) {
    nlohmann::json doc;
    doc["s"] = plan.s;
    doc["s_prime"] = plan.s_prime;
    doc["f"] = plan.f;
    doc["n"] = plan.n;
    doc["w"] = plan.w;
    doc["overlap"] = plan.overlap;
    doc["total_frames"] = plan.total_frames();
    doc["temporal_compression"] = temporal_compression;
    doc["latent_frames"] = latent_frames(plan.f, temporal_compression);

    auto& segs = doc["segments"] = nlohmann::json::array();
    for (int i = 1; i <= plan.n; ++i) {
        const VisibilityMask mask =
            build_mask(plan, i, MaskMode::inference, 0, temporal_compression);
        nlohmann::json seg;
        seg["i"] = i;
        seg["j0"] = mask.j0;
        auto& runs = seg["frame_mask_runlength"] = nlohmann::json::array();
        int j = 0;
        const int f = static_cast<int>(mask.frame_mask.size());
        while (j < f) {
            if (mask.frame_mask[static_cast<std::size_t>(j)]) {
                int start = j;
                while (j < f && mask.frame_mask[static_cast<std::size_t>(j)]) ++j;
                runs.push_back({start, j - start});
            } else {
                ++j;
            }
        }
        seg["latent_mask"] = mask.latent_mask;
        segs.push_back(std::move(seg));
    }

    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + file + "'");
}

} // namespace panoloom

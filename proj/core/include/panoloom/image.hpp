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
#include <vector>

namespace panoloom {

// Linear-ish RGB triple in [0, 255] used for sampling and shading math.
struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

// 8-bit interleaved RGB image, row-major, origin at the top-left.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // width * height * 3 bytes

    Image() = default;
    Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }
    void set(int x, int y, const Rgb& c);
    Rgb at(int x, int y) const;
    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// An equirectangular panorama is an Image whose width is exactly twice its
// height; x spans longitude [-pi, pi) and y spans latitude [pi/2, -pi/2].
// ERP-consuming operations check the 2:1 invariant at their boundary.
using ErpFrame = Image;

bool is_erp(const Image& img);

// Throws DomainError unless width == 2 * height.
ErpFrame make_erp_frame(int width, int height);

// Planar float image (channel planes, each row-major); carrier for the
// `.erpf` format and for lossless intermediate storage.
struct FloatImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data; // channels * height * width floats

    FloatImage() = default;
    FloatImage(int w, int h, int c)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, 0.0f) {}

    float& at(int c, int x, int y) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float at(int c, int x, int y) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

// Conversions quantize with round-half-away-from-zero and clamp to [0, 255].
FloatImage to_float(const Image& img);
Image to_u8(const FloatImage& img);

std::uint8_t quantize_channel(double value);

// Luma in [0, 255] (Rec. 601 weights); used by SSIM and the DCT provider.
double luminance(const Rgb& c);

// Mean absolute per-channel difference in 8-bit levels.
double mean_abs_diff(const Image& a, const Image& b);

} // namespace panoloom

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

#include "panoloom/image.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "panoloom/errors.hpp"

namespace panoloom {

void Image::set(int x, int y, const Rgb& c) {
    const std::size_t o = offset(x, y);
    rgb[o + 0] = quantize_channel(c.r);
    rgb[o + 1] = quantize_channel(c.g);
    rgb[o + 2] = quantize_channel(c.b);
}

Rgb Image::at(int x, int y) const {
    const std::size_t o = offset(x, y);
    return {static_cast<double>(rgb[o + 0]),
            static_cast<double>(rgb[o + 1]),
            static_cast<double>(rgb[o + 2])};
}

bool is_erp(const Image& img) {
    return img.width > 0 && img.height > 0 && img.width == 2 * img.height;
}

ErpFrame make_erp_frame(int width, int height) {
    if (width <= 0 || height <= 0 || width != 2 * height) {
        throw DomainError("ERP frame requires width == 2 * height, got " +
                          std::to_string(width) + "x" + std::to_string(height));
    }
    return Image(width, height);
}

std::uint8_t quantize_channel(double value) {
    const double r = std::round(value);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

FloatImage to_float(const Image& img) {
    FloatImage out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t o = img.offset(x, y);
            out.at(0, x, y) = img.rgb[o + 0];
            out.at(1, x, y) = img.rgb[o + 1];
            out.at(2, x, y) = img.rgb[o + 2];
        }
    }
    return out;
}

Image to_u8(const FloatImage& img) {
    if (img.channels != 3) {
        throw DomainError("to_u8 expects a 3-channel float image, got " +
                          std::to_string(img.channels) + " channels");
    }
    Image out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t o = out.offset(x, y);
            out.rgb[o + 0] = quantize_channel(img.at(0, x, y));
            out.rgb[o + 1] = quantize_channel(img.at(1, x, y));
            out.rgb[o + 2] = quantize_channel(img.at(2, x, y));
        }
    }
    return out;
}

double luminance(const Rgb& c) {
    return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
}

double mean_abs_diff(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw DomainError("mean_abs_diff: image shapes differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) {
        sum += std::abs(static_cast<int>(a.rgb[i]) - static_cast<int>(b.rgb[i]));
    }
    return a.rgb.empty() ? 0.0 : sum / static_cast<double>(a.rgb.size());
}

} // namespace panoloom

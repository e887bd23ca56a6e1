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

#include "panoloom/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "panoloom/errors.hpp"

namespace panoloom {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void append_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

} // namespace

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw Error("cannot open PNG for reading: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("libpng failed to decode " + path, 0);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    // Normalize everything to 8-bit RGB.
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    Image img(static_cast<int>(w), static_cast<int>(h));
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = img.rgb.data() + static_cast<std::size_t>(y) * w * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const Image& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0) throw DomainError("write_png: empty image");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw Error("cannot open PNG for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("libpng failed to encode " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.rgb.data() + static_cast<std::size_t>(y) * img.width * 3);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

FloatImage read_erpf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open erpf for reading: " + path);

    unsigned char header[16];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in) throw ParseError("erpf header truncated in " + path, static_cast<std::size_t>(in.gcount()));
    if (std::memcmp(header, "ERPF", 4) != 0) throw ParseError("bad erpf magic in " + path, 0);

    const std::uint32_t w = read_u32_le(header + 4);
    const std::uint32_t h = read_u32_le(header + 8);
    const std::uint32_t c = read_u32_le(header + 12);
    if (w == 0 || h == 0 || c == 0 || w > (1u << 20) || h > (1u << 20) || c > 64) {
        throw ParseError("implausible erpf dimensions in " + path, 4);
    }

    FloatImage img(static_cast<int>(w), static_cast<int>(h), static_cast<int>(c));
    const std::size_t payload = img.data.size() * sizeof(float);
    std::vector<unsigned char> raw(payload);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(payload));
    if (!in) {
        throw ParseError("erpf payload truncated in " + path,
                         16 + static_cast<std::size_t>(in.gcount()));
    }
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        std::uint32_t bits = read_u32_le(raw.data() + i * 4);
        float f;
        std::memcpy(&f, &bits, sizeof(f));
        img.data[i] = f;
    }
    return img;
}

void write_erpf(const FloatImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 || img.channels <= 0) {
        throw DomainError("write_erpf: empty image");
    }
    std::string buf;
    buf.reserve(16 + img.data.size() * 4);
    buf.append("ERPF", 4);
    append_u32_le(buf, static_cast<std::uint32_t>(img.width));
    append_u32_le(buf, static_cast<std::uint32_t>(img.height));
    append_u32_le(buf, static_cast<std::uint32_t>(img.channels));
    for (float f : img.data) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, sizeof(bits));
        append_u32_le(buf, bits);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open erpf for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("short write to " + path);
}

} // namespace panoloom

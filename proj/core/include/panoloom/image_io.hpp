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

#include <string>

#include "panoloom/image.hpp"

namespace panoloom {

// 8-bit RGB PNG.
Image read_png(const std::string& path);
void write_png(const Image& img, const std::string& path);

// Raw planar float format: header {magic "ERPF", u32 width, u32 height,
// u32 channels} followed by little-endian f32 planes, each row-major.
FloatImage read_erpf(const std::string& path);
void write_erpf(const FloatImage& img, const std::string& path);

} // namespace panoloom

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

#ifndef PANOLOOM_REPORTS_HPP
#define PANOLOOM_REPORTS_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Deterministic report writers. Same inputs, byte-identical files.

namespace panoloom::reports {

// Pretty-printed (2-space) JSON with a trailing newline.
void write_json(const nlohmann::json& doc, const std::string& file);

// RFC-4180-ish CSV; fields are quoted only when they need it.
void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const std::string& file);

struct CurveSeries {
    std::string label;
    std::vector<double> values; // x is the index
};

// Standalone SVG line chart (light grid, legend, fixed palette).
void write_curve_svg(const std::vector<CurveSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& file, int width = 960, int height = 540);

} // namespace panoloom::reports

#endif

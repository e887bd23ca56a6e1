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

#include "panoloom/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "panoloom/errors.hpp"

namespace panoloom::reports {

namespace {

std::ofstream open_out(const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot open '" + file + "' for writing");
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_json(const nlohmann::json& doc, const std::string& file) {
    auto out = open_out(file);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + file + "'");
}

void write_csv(const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const std::string& file) {
    auto out = open_out(file);
    const auto escape = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char ch : s) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        quoted += '"';
        return quoted;
    };
    const auto emit = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out << ',';
            out << escape(fields[i]);
        }
        out << '\n';
    };
    emit(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw DomainError("write_csv: row width " + std::to_string(row.size()) +
                              " does not match header width " + std::to_string(header.size()));
        emit(row);
    }
    if (!out) throw Error("write failed for '" + file + "'");
}

void write_curve_svg(const std::vector<CurveSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& file, int width, int height) {
    if (series.empty()) throw DomainError("write_curve_svg: no series");
    std::size_t max_n = 0;
    double lo = 0.0, hi = 1.0;
    bool seen = false;
    for (const CurveSeries& s : series) {
        if (s.values.empty()) throw DomainError("write_curve_svg: empty series");
        max_n = std::max(max_n, s.values.size());
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            if (!seen) {
                lo = hi = v;
                seen = true;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!seen) throw DomainError("write_curve_svg: no finite values");
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double ml = 64, mr = 24, mt = 40, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;
    const double xmax = max_n > 1 ? static_cast<double>(max_n - 1) : 1.0;
    const auto px = [&](double x) { return ml + pw * (x / xmax); };
    const auto py = [&](double y) { return mt + ph * (1.0 - (y - lo) / (hi - lo)); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b"};
    constexpr int kPaletteSize = 6;

    auto out = open_out(file);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(width / 2.0)
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << xml_escape(title) << "</text>\n";

    // Grid plus tick labels, 5 divisions each way.
    for (int i = 0; i <= 4; ++i) {
        const double ty = lo + (hi - lo) * i / 4.0;
        const double gy = py(ty);
        out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(gy) << "\" x2=\"" << fmt(ml + pw)
            << "\" y2=\"" << fmt(gy) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(gy + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(ty)
            << "</text>\n";
        const double tx = xmax * i / 4.0;
        const double gx = px(tx);
        out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(gx)
            << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(mt + ph + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(tx)
            << "</text>\n";
    }
    out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
        << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 10.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << fmt(mt + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\""
        << "rotate(-90 16 " << fmt(mt + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < series[k].values.size(); ++i) {
            const double v = series[k].values[i];
            if (!std::isfinite(v)) continue;
            if (!first) out << ' ';
            out << fmt(px(static_cast<double>(i))) << ',' << fmt(py(v));
            first = false;
        }
        out << "\"/>\n";
        const double ly = mt + 14 + 16 * static_cast<double>(k);
        out << "<line x1=\"" << fmt(ml + pw - 130) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(ml + pw - 110) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << fmt(ml + pw - 104) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(series[k].label)
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw Error("write failed for '" + file + "'");
}

} // namespace panoloom::reports

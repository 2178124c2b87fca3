// Copyright 2026 The efsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "efsim/svg.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace efsim::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 150, kTop = 40, kBottom = 60;
const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v, int precision = 4) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
    return std::string(buf, r.ptr);
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string header(const std::string &title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
           "</text>\n";
}

std::string axis_labels(const std::string &x_label, const std::string &y_label) {
    const double cy = kTop + (kHeight - kTop - kBottom) / 2;
    return "<text x=\"" + num(kLeft + (kWidth - kLeft - kRight) / 2) + "\" y=\"" + num(kHeight - 15) +
           "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n<text x=\"18\" y=\"" + num(cy) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num(cy) + ")\">" + escape(y_label) + "</text>\n";
}

}  // namespace

std::string render(const LinePlot &plot) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    for (const auto &s : plot.series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series '" + s.name + "' has mismatched lengths");
        for (std::size_t i = 0; i < s.x.size(); i++) {
            if (!std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x0 == x1) x0 -= 0.5, x1 += 0.5;
    if (y0 == y1) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1 - (y - y0) / (y1 - y0)) * ph; };

    std::string out = header(plot.title);
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; k++) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + num(xv, 3) +
               "</text>\n";
        const std::string ylab = plot.log_y ? "1e" + num(yv, 3) : num(yv, 3);
        out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" + ylab +
               "</text>\n";
    }
    out += axis_labels(plot.x_label, plot.y_label + (plot.log_y ? " (log10)" : ""));
    for (std::size_t si = 0; si < plot.series.size(); si++) {
        const auto &s = plot.series[si];
        const std::string color = kPalette[si % std::size(kPalette)];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); i++) {
            if (!std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
            const double cx = px(s.x[i]), cy = py(ty(s.y[i]));
            points += num(cx, 6) + "," + num(cy, 6) + " ";
            out += "<circle cx=\"" + num(cx, 6) + "\" cy=\"" + num(cy, 6) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        if (!s.scatter && !points.empty()) {
            out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
                   (s.dashed ? " stroke-dasharray=\"5,4\"" : "") + " points=\"" + points + "\"/>\n";
        }
        const double ly = kTop + 14 + 18 * static_cast<double>(si);
        out += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(kWidth - kRight + 30) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"" +
               (s.dashed ? " stroke-dasharray=\"5,4\"" : "") + "/>\n";
        out += "<text x=\"" + num(kWidth - kRight + 35) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string render(const Heatmap &map) {
    const std::size_t rows = map.values.size();
    const std::size_t cols = rows ? map.values[0].size() : 0;
    if (map.y_ticks.size() != rows || map.x_ticks.size() != cols) {
        throw std::invalid_argument("heatmap ticks do not match the value grid");
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto &r : map.values) {
        if (r.size() != cols) throw std::invalid_argument("heatmap rows have different lengths");
        for (double v : r) {
            if (!std::isfinite(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo < hi)) hi = lo + 1;
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    const double cw = cols ? pw / static_cast<double>(cols) : pw, ch = rows ? ph / static_cast<double>(rows) : ph;
    std::string out = header(map.title);
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            const double v = map.values[r][c];
            const double t = std::isfinite(v) ? (v - lo) / (hi - lo) : 0;
            const int shade = static_cast<int>(std::lround(255 * (1 - t)));
            const double x = kLeft + cw * static_cast<double>(c);
            const double y = kTop + ch * static_cast<double>(rows - 1 - r);
            std::string stroke = "none";
            if (r < map.flags.size() && c < map.flags[r].size() && map.flags[r][c] >= 0) {
                stroke = map.flags[r][c] ? "#2ca02c" : "#d62728";
            }
            out += "<rect x=\"" + num(x, 6) + "\" y=\"" + num(y, 6) + "\" width=\"" + num(cw, 6) + "\" height=\"" +
                   num(ch, 6) + "\" fill=\"rgb(255," + std::to_string(shade) + "," + std::to_string(shade) +
                   ")\" stroke=\"" + stroke + "\" stroke-width=\"3\"/>\n";
            out += "<text x=\"" + num(x + cw / 2, 6) + "\" y=\"" + num(y + ch / 2 + 4, 6) +
                   "\" text-anchor=\"middle\" font-size=\"10\">" + num(v, 3) + "</text>\n";
        }
    }
    for (std::size_t c = 0; c < cols; c++) {
        out += "<text x=\"" + num(kLeft + cw * (static_cast<double>(c) + 0.5), 6) + "\" y=\"" + num(kTop + ph + 18) +
               "\" text-anchor=\"middle\">" + escape(map.x_ticks[c]) + "</text>\n";
    }
    for (std::size_t r = 0; r < rows; r++) {
        out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + ch * (static_cast<double>(rows - r) - 0.5) + 4, 6) +
               "\" text-anchor=\"end\">" + escape(map.y_ticks[r]) + "</text>\n";
    }
    out += axis_labels(map.x_label, map.y_label);
    out += "</svg>\n";
    return out;
}

}  // namespace efsim::svg

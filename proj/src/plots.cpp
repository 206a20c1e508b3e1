// Copyright 2026 The Titan Authors
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

#include "titan/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace titan {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string rgb(int r, int g, int b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

std::string lerp_rgb(int r0, int g0, int b0, int r1, int g1, int b1,
                     double t) {
    t = std::clamp(t, 0.0, 1.0);
    return rgb(static_cast<int>(r0 + t * (r1 - r0)),
               static_cast<int>(g0 + t * (g1 - g0)),
               static_cast<int>(b0 + t * (b1 - b0)));
}

// value already normalized to [-1, 1] (diverging) or [0, 1] (sequential)
std::string scale_color(ColorScale scale, double t) {
    if (scale == ColorScale::SequentialBlue) {
        return lerp_rgb(255, 255, 255, 20, 44, 120, t);
    }
    if (t >= 0.0) return lerp_rgb(255, 255, 255, 40, 160, 60, t);   // green
    return lerp_rgb(255, 255, 255, 200, 40, 180, -t);               // magenta
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

void text(std::ostringstream& svg, double x, double y, const std::string& s,
          int size = 12, const char* anchor = "middle") {
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
        << "\" font-family=\"sans-serif\" font-size=\"" << size
        << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
}

struct Ticks {
    std::vector<double> at;
};

Ticks linear_ticks(double lo, double hi) {
    Ticks t;
    if (!(hi > lo)) {
        t.at = {lo};
        return t;
    }
    const double span = hi - lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
    if (span / step > 8) step *= 2;
    if (span / step > 8) step *= 2.5;
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-12 * span; v += step) {
        t.at.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    }
    return t;
}

} // namespace

std::string heatmap_svg(const HeatmapSpec& spec) {
    const Grid& g = spec.values;
    if (g.rows < 1 || g.cols < 1) throw_config("heatmap: empty grid");
    const double cell_w = std::min(56.0, 640.0 / g.cols);
    const double cell_h = std::min(40.0, 480.0 / g.rows);
    const double left = 88, top = 56;
    const double plot_w = cell_w * g.cols, plot_h = cell_h * g.rows;
    const double width = left + plot_w + 110;
    const double height = top + plot_h + 50;

    double vmax = 0.0, vmin = 0.0;
    for (double v : g.data) {
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    double norm = 1.0;
    if (spec.fixed_max > 0.0) {
        norm = spec.fixed_max;
    } else if (spec.scale == ColorScale::DivergingGreenMagenta) {
        norm = std::max(std::abs(vmin), std::abs(vmax)); // symmetric clip
        if (norm == 0.0) norm = 1.0;
    } else {
        norm = vmax > 0.0 ? vmax : 1.0;
    }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(svg, left + plot_w / 2, 24, spec.title, 14);
    if (!spec.legend.empty()) text(svg, left + plot_w / 2, 42, spec.legend, 11);

    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const double v = g.at(r, c);
            const double t = spec.scale == ColorScale::DivergingGreenMagenta
                                 ? v / norm
                                 : v / norm;
            svg << "<rect x=\"" << fmt(left + c * cell_w) << "\" y=\""
                << fmt(top + r * cell_h) << "\" width=\"" << fmt(cell_w)
                << "\" height=\"" << fmt(cell_h) << "\" fill=\""
                << scale_color(spec.scale, t)
                << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
            if (g.cols <= 16 && g.rows <= 14) {
                text(svg, left + (c + 0.5) * cell_w, top + (r + 0.62) * cell_h,
                     fmt(v), 9);
            }
        }
    }
    for (int r = 0; r < g.rows; ++r) {
        const std::string label = r < static_cast<int>(spec.row_labels.size())
                                      ? spec.row_labels[r]
                                      : std::to_string(r);
        text(svg, left - 8, top + (r + 0.62) * cell_h, label, 11, "end");
    }
    for (int c = 0; c < g.cols; ++c) {
        const std::string label = c < static_cast<int>(spec.col_labels.size())
                                      ? spec.col_labels[c]
                                      : std::to_string(c);
        text(svg, left + (c + 0.5) * cell_w, top + plot_h + 16, label, 11);
    }

    // colorbar
    const double bar_x = left + plot_w + 26, bar_h = plot_h;
    const int steps = 48;
    for (int i = 0; i < steps; ++i) {
        const double frac = 1.0 - static_cast<double>(i) / (steps - 1);
        const double t = spec.scale == ColorScale::DivergingGreenMagenta
                             ? 2.0 * frac - 1.0
                             : frac;
        svg << "<rect x=\"" << fmt(bar_x) << "\" y=\""
            << fmt(top + i * bar_h / steps) << "\" width=\"16\" height=\""
            << fmt(bar_h / steps + 0.5) << "\" fill=\""
            << scale_color(spec.scale, t) << "\"/>\n";
    }
    if (spec.scale == ColorScale::DivergingGreenMagenta) {
        text(svg, bar_x + 22, top + 10, "+" + fmt(norm), 10, "start");
        text(svg, bar_x + 22, top + bar_h / 2 + 4, "0", 10, "start");
        text(svg, bar_x + 22, top + bar_h, "-" + fmt(norm), 10, "start");
    } else {
        text(svg, bar_x + 22, top + 10, fmt(norm), 10, "start");
        text(svg, bar_x + 22, top + bar_h, "0", 10, "start");
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string line_plot_svg(const LinePlotSpec& spec) {
    if (spec.series.empty()) throw_config("line plot: no series");
    const double left = 70, top = 44, plot_w = 560, plot_h = 360;
    const double width = left + plot_w + 150, height = top + plot_h + 56;

    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Series& s : spec.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            double lo = s.y_low.size() == s.y.size() ? s.y_low[i] : s.y[i];
            double hi = s.y_high.size() == s.y.size() ? s.y_high[i] : s.y[i];
            if (spec.log_y) {
                lo = std::max(lo, 1e-300);
                hi = std::max(hi, 1e-300);
            }
            ymin = std::min(ymin, ty(lo));
            ymax = std::max(ymax, ty(hi));
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double ypad = 0.06 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double v) {
        return left + (tx(v) - xmin) / (xmax - xmin) * plot_w;
    };
    auto py = [&](double v) {
        return top + plot_h - (ty(v) - ymin) / (ymax - ymin) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(svg, left + plot_w / 2, 22, spec.title, 14);
    svg << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // ticks
    const Ticks xt = linear_ticks(xmin, xmax);
    for (double v : xt.at) {
        const double x = left + (v - xmin) / (xmax - xmin) * plot_w;
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top) << "\" x2=\""
            << fmt(x) << "\" y2=\"" << fmt(top + plot_h)
            << "\" stroke=\"#e0e0e0\"/>\n";
        const double shown = spec.log_x ? std::pow(10.0, v) : v;
        text(svg, x, top + plot_h + 18, fmt(shown), 10);
    }
    const Ticks yt = linear_ticks(ymin, ymax);
    for (double v : yt.at) {
        const double y = top + plot_h - (v - ymin) / (ymax - ymin) * plot_h;
        svg << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(left + plot_w) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#e0e0e0\"/>\n";
        const double shown = spec.log_y ? std::pow(10.0, v) : v;
        text(svg, left - 8, y + 4, fmt(shown), 10, "end");
    }
    text(svg, left + plot_w / 2, height - 10, spec.x_label, 12);
    svg << "<text x=\"16\" y=\"" << fmt(top + plot_h / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
        << "middle\" transform=\"rotate(-90 16 " << fmt(top + plot_h / 2)
        << ")\">" << escape(spec.y_label) << "</text>\n";

    const char* palette[] = {"#cc2222", "#2255cc", "#222222",
                             "#22aa55", "#aa22aa", "#cc8800"};
    int color_idx = 0;
    for (const Series& s : spec.series) {
        const std::string color = palette[color_idx % 6];
        ++color_idx;
        if (s.y_low.size() == s.y.size() && s.y_high.size() == s.y.size()) {
            std::ostringstream pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double hi =
                    spec.log_y ? std::max(s.y_high[i], 1e-300) : s.y_high[i];
                pts << fmt(px(s.x[i])) << ',' << fmt(py(hi)) << ' ';
            }
            for (std::size_t i = s.x.size(); i-- > 0;) {
                const double lo =
                    spec.log_y ? std::max(s.y_low[i], 1e-300) : s.y_low[i];
                pts << fmt(px(s.x[i])) << ',' << fmt(py(lo)) << ' ';
            }
            svg << "<polygon points=\"" << pts.str() << "\" fill=\"" << color
                << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = spec.log_y ? std::max(s.y[i], 1e-300) : s.y[i];
            pts << fmt(px(s.x[i])) << ',' << fmt(py(yv)) << ' ';
        }
        svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\""
            << " stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
    }

    // legend
    double ly = top + 12;
    color_idx = 0;
    for (const Series& s : spec.series) {
        const std::string color = palette[color_idx % 6];
        ++color_idx;
        svg << "<line x1=\"" << fmt(left + plot_w + 12) << "\" y1=\""
            << fmt(ly - 4) << "\" x2=\"" << fmt(left + plot_w + 34)
            << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        text(svg, left + plot_w + 40, ly, s.name, 11, "start");
        ly += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace titan

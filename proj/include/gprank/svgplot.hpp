#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "format.hpp"

namespace gprank {

struct SvgSeries {
    std::string name;
    std::vector<double> ys;
};

// Self-contained SVG line plot over a shared x grid. With log_y, nonpositive
// points are skipped and the y axis is ticked at powers of ten.
inline std::string svg_line_plot(const std::string& title, const std::string& x_label,
                                 const std::string& y_label, const std::vector<double>& xs,
                                 const std::vector<SvgSeries>& series, bool log_y) {
    if (xs.size() < 2) throw config_error("svg_line_plot: need at least two x values");
    for (const auto& s : series)
        if (s.ys.size() != xs.size())
            throw config_error("svg_line_plot: series length mismatch");

    const double width = 720, height = 480;
    const double left = 70, right = 24, top = 42, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = xs.front(), x_max = xs.front();
    for (double x : xs) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    if (x_max == x_min) x_max = x_min + 1.0;

    bool any = false;
    double y_min = 0.0, y_max = 0.0;
    for (const auto& s : series) {
        for (double y : s.ys) {
            if (log_y && !(y > 0.0)) continue;
            const double v = log_y ? std::log10(y) : y;
            if (!any) {
                y_min = y_max = v;
                any = true;
            } else {
                y_min = std::min(y_min, v);
                y_max = std::max(y_max, v);
            }
        }
    }
    if (!any) throw numeric_error("svg_line_plot: no plottable points");
    if (y_max == y_min) {
        y_max += 1.0;
        y_min -= 1.0;
    }
    const double pad = 0.04 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const std::size_t palette_size = sizeof(palette) / sizeof(palette[0]);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_g(width) +
           "\" height=\"" + fmt_g(height) + "\" viewBox=\"0 0 " + fmt_g(width) + " " +
           fmt_g(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt_g(width / 2) + "\" y=\"24\" font-size=\"15\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
           title + "</text>\n";
    svg += "<rect x=\"" + fmt_g(left) + "\" y=\"" + fmt_g(top) + "\" width=\"" + fmt_g(plot_w) +
           "\" height=\"" + fmt_g(plot_h) + "\" fill=\"none\" stroke=\"#444\"/>\n";

    // x ticks: five evenly spaced values
    for (int i = 0; i <= 4; ++i) {
        const double x = x_min + (x_max - x_min) * i / 4.0;
        const double gx = px(x);
        svg += "<line x1=\"" + fmt_g(gx) + "\" y1=\"" + fmt_g(top + plot_h) + "\" x2=\"" +
               fmt_g(gx) + "\" y2=\"" + fmt_g(top + plot_h + 5) + "\" stroke=\"#444\"/>\n";
        svg += "<text x=\"" + fmt_g(gx) + "\" y=\"" + fmt_g(top + plot_h + 20) +
               "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
               fmt_g(x, 4) + "</text>\n";
    }
    // y ticks: powers of ten in log mode, five even values otherwise
    if (log_y) {
        for (int e = static_cast<int>(std::ceil(y_min)); e <= static_cast<int>(std::floor(y_max)); ++e) {
            const double gy = py(e);
            svg += "<line x1=\"" + fmt_g(left - 5) + "\" y1=\"" + fmt_g(gy) + "\" x2=\"" +
                   fmt_g(left + plot_w) + "\" y2=\"" + fmt_g(gy) +
                   "\" stroke=\"#ddd\" stroke-dasharray=\"3,3\"/>\n";
            svg += "<text x=\"" + fmt_g(left - 8) + "\" y=\"" + fmt_g(gy + 4) +
                   "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">1e" +
                   std::to_string(e) + "</text>\n";
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double v = y_min + (y_max - y_min) * i / 4.0;
            const double gy = py(v);
            svg += "<text x=\"" + fmt_g(left - 8) + "\" y=\"" + fmt_g(gy + 4) +
                   "\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">" +
                   fmt_g(v, 4) + "</text>\n";
        }
    }
    svg += "<text x=\"" + fmt_g(left + plot_w / 2) + "\" y=\"" + fmt_g(height - 14) +
           "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt_g(top + plot_h / 2) +
           "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fmt_g(top + plot_h / 2) + ")\">" + y_label + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % palette_size];
        std::string points;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double y = series[si].ys[i];
            if (log_y && !(y > 0.0)) continue;
            const double v = log_y ? std::log10(y) : y;
            points += fmt_g(px(xs[i]), 8) + "," + fmt_g(py(v), 8) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.6\" points=\"" + points + "\"/>\n";
        const double ly = top + 16 + 16 * static_cast<double>(si);
        svg += "<line x1=\"" + fmt_g(left + plot_w - 150) + "\" y1=\"" + fmt_g(ly - 4) +
               "\" x2=\"" + fmt_g(left + plot_w - 130) + "\" y2=\"" + fmt_g(ly - 4) +
               "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt_g(left + plot_w - 124) + "\" y=\"" + fmt_g(ly) +
               "\" font-size=\"11\" font-family=\"sans-serif\">" + series[si].name + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace gprank

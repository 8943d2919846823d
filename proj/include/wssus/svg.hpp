#pragma once

// Self-contained deterministic SVG rendering of a bound curve: log-x
// bandwidth, linear-y rate, one polyline per bound, legend, and the critical
// bandwidth marked. Byte output depends only on the curve and unit label.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wssus/bounds.hpp"
#include "wssus/numfmt.hpp"

namespace wssus {

namespace detail {

struct Series {
    const char* name;
    const char* color;
    double BoundPoint::* field;
};

inline constexpr Series kSeries[4] = {
    {"ub1", "#1f77b4", &BoundPoint::ub1},
    {"ub2", "#ff7f0e", &BoundPoint::ub2},
    {"lb", "#2ca02c", &BoundPoint::lb},
    {"lb_approx", "#d62728", &BoundPoint::lb_approx},
};

}  // namespace detail

inline std::string render_plot_svg(const BoundCurve& curve, const std::string& unit = "nat") {
    if (curve.points.empty()) throw std::invalid_argument("render_plot_svg: empty curve");

    constexpr double kWidth = 960, kHeight = 600;
    constexpr double kLeft = 84, kRight = 30, kTop = 28, kBottom = 62;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    double lg_min = std::numeric_limits<double>::infinity();
    double lg_max = -std::numeric_limits<double>::infinity();
    double y_max = 0.0;
    for (const BoundPoint& p : curve.points) {
        if (std::isfinite(p.w_hz) && p.w_hz > 0.0) {
            lg_min = std::min(lg_min, std::log10(p.w_hz));
            lg_max = std::max(lg_max, std::log10(p.w_hz));
        }
        for (const auto& s : detail::kSeries) {
            const double v = p.*(s.field);
            if (std::isfinite(v)) y_max = std::max(y_max, v);
        }
    }
    if (!std::isfinite(lg_min) || lg_max <= lg_min)
        throw std::invalid_argument("render_plot_svg: curve needs at least two distinct bandwidths");
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.06;

    auto sx = [&](double w) { return kLeft + (std::log10(w) - lg_min) / (lg_max - lg_min) * plot_w; };
    auto sy = [&](double v) { return kTop + plot_h - v / y_max * plot_h; };

    std::string out;
    out.reserve(1 << 16);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_fixed(kWidth, 0) +
           "\" height=\"" + fmt_fixed(kHeight, 0) + "\" viewBox=\"0 0 " + fmt_fixed(kWidth, 0) +
           " " + fmt_fixed(kHeight, 0) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // frame
    out += "<line x1=\"" + fmt_fixed(kLeft, 2) + "\" y1=\"" + fmt_fixed(kTop + plot_h, 2) +
           "\" x2=\"" + fmt_fixed(kLeft + plot_w, 2) + "\" y2=\"" + fmt_fixed(kTop + plot_h, 2) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + fmt_fixed(kLeft, 2) + "\" y1=\"" + fmt_fixed(kTop, 2) + "\" x2=\"" +
           fmt_fixed(kLeft, 2) + "\" y2=\"" + fmt_fixed(kTop + plot_h, 2) +
           "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    // decade ticks on x
    for (int e = static_cast<int>(std::ceil(lg_min - 1e-9));
         e <= static_cast<int>(std::floor(lg_max + 1e-9)); ++e) {
        const double x = kLeft + (e - lg_min) / (lg_max - lg_min) * plot_w;
        out += "<line x1=\"" + fmt_fixed(x, 2) + "\" y1=\"" + fmt_fixed(kTop + plot_h, 2) +
               "\" x2=\"" + fmt_fixed(x, 2) + "\" y2=\"" + fmt_fixed(kTop + plot_h + 6, 2) +
               "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt_fixed(x, 2) + "\" y=\"" + fmt_fixed(kTop + plot_h + 22, 2) +
               "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">1e" +
               std::to_string(e) + "</text>\n";
    }
    out += "<text x=\"" + fmt_fixed(kLeft + plot_w / 2, 2) + "\" y=\"" +
           fmt_fixed(kHeight - 14, 2) +
           "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">bandwidth [Hz]"
           "</text>\n";

    // y ticks
    for (int i = 0; i <= 5; ++i) {
        const double v = y_max * i / 5.0;
        const double y = sy(v);
        out += "<line x1=\"" + fmt_fixed(kLeft - 6, 2) + "\" y1=\"" + fmt_fixed(y, 2) +
               "\" x2=\"" + fmt_fixed(kLeft, 2) + "\" y2=\"" + fmt_fixed(y, 2) +
               "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt_fixed(kLeft - 10, 2) + "\" y=\"" + fmt_fixed(y + 4, 2) +
               "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"end\">" +
               fmt_general(v, 3) + "</text>\n";
    }
    out += "<text x=\"18\" y=\"" + fmt_fixed(kTop + plot_h / 2, 2) +
           "\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " +
           fmt_fixed(kTop + plot_h / 2, 2) + ")\">rate [" + unit + "/s]</text>\n";

    // critical bandwidth: argmax of lb, falling back to ub1 when lb is flat 0
    int star = -1;
    double star_best = 0.0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const double v = curve.points[i].lb;
        if (std::isfinite(v) && v > star_best) {
            star_best = v;
            star = static_cast<int>(i);
        }
    }
    if (star < 0) {
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const double v = curve.points[i].ub1;
            if (std::isfinite(v) && v > star_best) {
                star_best = v;
                star = static_cast<int>(i);
            }
        }
    }
    if (star >= 0) {
        const double x = sx(curve.points[star].w_hz);
        out += "<line x1=\"" + fmt_fixed(x, 2) + "\" y1=\"" + fmt_fixed(kTop, 2) + "\" x2=\"" +
               fmt_fixed(x, 2) + "\" y2=\"" + fmt_fixed(kTop + plot_h, 2) +
               "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
        out += "<text x=\"" + fmt_fixed(x + 4, 2) + "\" y=\"" + fmt_fixed(kTop + 14, 2) +
               "\" font-family=\"monospace\" font-size=\"12\">W* = " +
               fmt_general(curve.points[star].w_hz, 4) + " Hz</text>\n";
    }

    // one polyline per bound; non-finite points are skipped
    for (const auto& s : detail::kSeries) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += s.color;
        out += "\" stroke-width=\"1.8\" points=\"";
        bool first = true;
        for (const BoundPoint& p : curve.points) {
            const double v = p.*(s.field);
            if (!std::isfinite(v) || !std::isfinite(p.w_hz) || p.w_hz <= 0.0) continue;
            if (!first) out += ' ';
            out += fmt_fixed(sx(p.w_hz), 2) + "," + fmt_fixed(sy(v), 2);
            first = false;
        }
        out += "\"/>\n";
    }

    // legend
    {
        const double lx = kLeft + plot_w - 150, ly = kTop + 12;
        for (int i = 0; i < 4; ++i) {
            const double y = ly + 18.0 * i;
            out += "<line x1=\"" + fmt_fixed(lx, 2) + "\" y1=\"" + fmt_fixed(y, 2) + "\" x2=\"" +
                   fmt_fixed(lx + 26, 2) + "\" y2=\"" + fmt_fixed(y, 2) + "\" stroke=\"";
            out += detail::kSeries[i].color;
            out += "\" stroke-width=\"2.2\"/>\n";
            out += "<text x=\"" + fmt_fixed(lx + 32, 2) + "\" y=\"" + fmt_fixed(y + 4, 2) +
                   "\" font-family=\"monospace\" font-size=\"13\">";
            out += detail::kSeries[i].name;
            out += "</text>\n";
        }
    }

    out += "</svg>\n";
    return out;
}

/// Writes the rendered SVG; throws std::runtime_error on I/O failure.
inline void emit_plot(const BoundCurve& curve, const std::string& path,
                      const std::string& unit = "nat") {
    const std::string svg = render_plot_svg(curve, unit);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_plot: cannot open '" + path + "' for writing");
    out << svg;
    out.flush();
    if (!out) throw std::runtime_error("emit_plot: write to '" + path + "' failed");
}

}  // namespace wssus

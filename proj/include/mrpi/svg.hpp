#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace mrpi {

/// Self-contained SVG 1.1 line and plane plots: polylines, rectangles, axis
/// ticks, and an inline legend. No external assets, no scripting; every
/// coordinate is rendered through the deterministic double formatter.

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    std::string color;
};

struct PlotRect {
    std::string label;
    double cx = 0.0, cy = 0.0, hx = 0.0, hy = 0.0;
    std::string color;
    bool dashed = false;
};

struct PlotPath {
    std::vector<std::pair<double, double>> points;
    std::string color;
    double opacity = 1.0;
};

namespace detail {

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};

inline std::string svg_num(double v) {
    // Keep coordinates compact: round to 1/100 of a pixel.
    return format_double(std::round(v * 100.0) / 100.0);
}

inline double nice_step(double range, int target_ticks) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    const double lead = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return lead * mag;
}

inline void svg_open(std::string& s, double w, double h) {
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + svg_num(w) +
         "\" height=\"" + svg_num(h) + "\" viewBox=\"0 0 " + svg_num(w) + " " + svg_num(h) +
         "\">\n";
    s += "<rect width=\"" + svg_num(w) + "\" height=\"" + svg_num(h) + "\" fill=\"white\"/>\n";
}

inline void svg_text(std::string& s, double x, double y, const std::string& t, int size,
                     const char* anchor, const std::string& extra = "") {
    s += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(y) +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\"" + extra + ">" + t + "</text>\n";
}

inline void svg_line(std::string& s, double x1, double y1, double x2, double y2,
                     const char* color, double width) {
    s += "<line x1=\"" + svg_num(x1) + "\" y1=\"" + svg_num(y1) + "\" x2=\"" + svg_num(x2) +
         "\" y2=\"" + svg_num(y2) + "\" stroke=\"" + color + "\" stroke-width=\"" +
         format_double(width) + "\"/>\n";
}

}  // namespace detail

/// Decay-style plot: series of (n, value) points, optional log-scale y axis
/// with decade ticks. Nonpositive values are skipped in log mode.
inline std::string render_line_plot(const std::string& title, const std::string& x_label,
                                    const std::string& y_label,
                                    const std::vector<PlotSeries>& series, bool log_y) {
    if (series.empty()) throw InvalidArgument("render_line_plot: no series");
    const double w = 720.0, h = 480.0;
    const double ml = 78.0, mr = 24.0, mt = 46.0, mb = 58.0;
    const double pw = w - ml - mr, ph = h - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : series)
        for (const auto& [px, py] : s.points) {
            if (log_y && !(py > 0.0)) continue;
            xmin = std::min(xmin, px);
            xmax = std::max(xmax, px);
            const double yv = log_y ? std::log10(py) : py;
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw InvalidArgument("render_line_plot: no plottable points");
    if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }

    auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };

    std::string out;
    detail::svg_open(out, w, h);
    detail::svg_text(out, w / 2.0, 26.0, title, 15, "middle");

    // Ticks and grid.
    if (log_y) {
        const int d0 = static_cast<int>(std::ceil(ymin - 1e-9));
        const int d1 = static_cast<int>(std::floor(ymax + 1e-9));
        const int span = std::max(1, d1 - d0);
        const int step = (span + 7) / 8;
        for (int d = d0; d <= d1; d += std::max(1, step)) {
            const double y = sy(static_cast<double>(d));
            detail::svg_line(out, ml, y, w - mr, y, "#dddddd", 1.0);
            std::string lab = d >= -4 && d <= 4 ? format_double(std::pow(10.0, d))
                                                : "1e" + std::to_string(d);
            detail::svg_text(out, ml - 8.0, y + 4.0, lab, 11, "end");
        }
    } else {
        const double step = detail::nice_step(ymax - ymin, 6);
        for (double v = std::ceil(ymin / step) * step; v <= ymax + 1e-9 * step; v += step) {
            const double y = sy(v);
            detail::svg_line(out, ml, y, w - mr, y, "#dddddd", 1.0);
            detail::svg_text(out, ml - 8.0, y + 4.0, format_double(std::round(v / step) * step),
                             11, "end");
        }
    }
    {
        const double step = detail::nice_step(xmax - xmin, 7);
        for (double v = std::ceil(xmin / step) * step; v <= xmax + 1e-9 * step; v += step) {
            const double x = sx(v);
            detail::svg_line(out, x, mt, x, h - mb, "#eeeeee", 1.0);
            detail::svg_text(out, x, h - mb + 18.0, format_double(std::round(v / step) * step),
                             11, "middle");
        }
    }
    // Axes frame.
    detail::svg_line(out, ml, mt, ml, h - mb, "#333333", 1.5);
    detail::svg_line(out, ml, h - mb, w - mr, h - mb, "#333333", 1.5);
    detail::svg_text(out, ml + pw / 2.0, h - 14.0, x_label, 13, "middle");
    detail::svg_text(out, 20.0, mt + ph / 2.0, y_label, 13, "middle",
                     " transform=\"rotate(-90 20 " + detail::svg_num(mt + ph / 2.0) + ")\"");

    // Series polylines.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string color =
            series[i].color.empty() ? detail::kPalette[i % 6] : series[i].color;
        std::string pts;
        for (const auto& [px, py] : series[i].points) {
            if (log_y && !(py > 0.0)) continue;
            const double yv = log_y ? std::log10(py) : py;
            pts += detail::svg_num(sx(px)) + "," + detail::svg_num(sy(yv)) + " ";
        }
        if (!pts.empty()) pts.pop_back();
        out += "<polyline fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    }
    // Legend, top right inside the frame.
    {
        double ly = mt + 16.0;
        const double lx = w - mr - 170.0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const std::string color =
                series[i].color.empty() ? detail::kPalette[i % 6] : series[i].color;
            detail::svg_line(out, lx, ly - 4.0, lx + 22.0, ly - 4.0, color.c_str(), 2.5);
            detail::svg_text(out, lx + 28.0, ly, series[i].label, 12, "start");
            ly += 18.0;
        }
    }
    out += "</svg>\n";
    return out;
}

/// Plane (state-space) plot with equal axis scaling: boxes drawn as outlined
/// rectangles, trajectories as translucent polylines, plus start markers.
inline std::string render_plane_plot(const std::string& title, const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<PlotRect>& rects,
                                     const std::vector<PlotPath>& paths) {
    if (rects.empty() && paths.empty())
        throw InvalidArgument("render_plane_plot: nothing to draw");
    const double w = 600.0, h = 600.0;
    const double ml = 70.0, mr = 24.0, mt = 46.0, mb = 56.0;
    const double pw = w - ml - mr, ph = h - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotRect& r : rects) {
        xmin = std::min(xmin, r.cx - r.hx);
        xmax = std::max(xmax, r.cx + r.hx);
        ymin = std::min(ymin, r.cy - r.hy);
        ymax = std::max(ymax, r.cy + r.hy);
    }
    for (const PlotPath& p : paths)
        for (const auto& [px, py] : p.points) {
            xmin = std::min(xmin, px);
            xmax = std::max(xmax, px);
            ymin = std::min(ymin, py);
            ymax = std::max(ymax, py);
        }
    const double padx = 0.06 * std::max(1e-9, xmax - xmin);
    const double pady = 0.06 * std::max(1e-9, ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
    // Equal scale: expand the shorter range.
    const double scale = std::min(pw / (xmax - xmin), ph / (ymax - ymin));
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    xmin = cx - 0.5 * pw / scale; xmax = cx + 0.5 * pw / scale;
    ymin = cy - 0.5 * ph / scale; ymax = cy + 0.5 * ph / scale;

    auto sx = [&](double v) { return ml + (v - xmin) * scale; };
    auto sy = [&](double v) { return mt + ph - (v - ymin) * scale; };

    std::string out;
    detail::svg_open(out, w, h);
    detail::svg_text(out, w / 2.0, 26.0, title, 15, "middle");

    const double step = detail::nice_step(std::max(xmax - xmin, ymax - ymin), 7);
    for (double v = std::ceil(xmin / step) * step; v <= xmax + 1e-9 * step; v += step) {
        detail::svg_line(out, sx(v), mt, sx(v), h - mb, "#eeeeee", 1.0);
        detail::svg_text(out, sx(v), h - mb + 18.0, format_double(std::round(v / step) * step),
                         11, "middle");
    }
    for (double v = std::ceil(ymin / step) * step; v <= ymax + 1e-9 * step; v += step) {
        detail::svg_line(out, ml, sy(v), w - mr, sy(v), "#eeeeee", 1.0);
        detail::svg_text(out, ml - 8.0, sy(v) + 4.0, format_double(std::round(v / step) * step),
                         11, "end");
    }
    detail::svg_line(out, ml, mt, ml, h - mb, "#333333", 1.5);
    detail::svg_line(out, ml, h - mb, w - mr, h - mb, "#333333", 1.5);
    detail::svg_text(out, ml + pw / 2.0, h - 14.0, x_label, 13, "middle");
    detail::svg_text(out, 20.0, mt + ph / 2.0, y_label, 13, "middle",
                     " transform=\"rotate(-90 20 " + detail::svg_num(mt + ph / 2.0) + ")\"");

    for (const PlotPath& p : paths) {
        std::string pts;
        for (const auto& [px, py] : p.points)
            pts += detail::svg_num(sx(px)) + "," + detail::svg_num(sy(py)) + " ";
        if (!pts.empty()) pts.pop_back();
        out += "<polyline fill=\"none\" stroke=\"" + p.color + "\" stroke-opacity=\"" +
               format_double(p.opacity) + "\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
        if (!p.points.empty())
            out += "<circle cx=\"" + detail::svg_num(sx(p.points.front().first)) + "\" cy=\"" +
                   detail::svg_num(sy(p.points.front().second)) + "\" r=\"2.5\" fill=\"" +
                   p.color + "\"/>\n";
    }
    for (std::size_t i = 0; i < rects.size(); ++i) {
        const PlotRect& r = rects[i];
        const std::string color = r.color.empty() ? detail::kPalette[i % 6] : r.color;
        out += "<rect x=\"" + detail::svg_num(sx(r.cx - r.hx)) + "\" y=\"" +
               detail::svg_num(sy(r.cy + r.hy)) + "\" width=\"" +
               detail::svg_num(2.0 * r.hx * scale) + "\" height=\"" +
               detail::svg_num(2.0 * r.hy * scale) + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\"" + (r.dashed ? " stroke-dasharray=\"7,5\"" : "") +
               "/>\n";
    }
    {
        double ly = mt + 16.0;
        const double lx = ml + 10.0;
        for (std::size_t i = 0; i < rects.size(); ++i) {
            if (rects[i].label.empty()) continue;
            const std::string color = rects[i].color.empty() ? detail::kPalette[i % 6]
                                                             : rects[i].color;
            detail::svg_line(out, lx, ly - 4.0, lx + 22.0, ly - 4.0, color.c_str(), 2.5);
            detail::svg_text(out, lx + 28.0, ly, rects[i].label, 12, "start");
            ly += 18.0;
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mrpi

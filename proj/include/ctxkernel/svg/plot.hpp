#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace ctxk::svg {

struct Series {
    std::string name;
    std::vector<std::array<double, 2>> points; // (x, y)
    std::vector<double> yerr;                  // empty or one per point
    std::string color = "#1f6fb2";
    bool draw_line = true;
    bool draw_markers = true;
    bool dashed = false;
};

struct Panel {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<Series> series;
    std::vector<double> hlines; // reference lines
};

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;

    double map(double v, double pix_lo, double pix_hi) const {
        double t = (v - lo) / (hi - lo);
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

inline AxisRange nice_range(double lo, double hi) {
    if (!(lo < hi)) {
        lo -= 0.5;
        hi += 0.5;
    }
    double pad = 0.06 * (hi - lo);
    return {lo - pad, hi + pad};
}

inline std::vector<double> ticks(const AxisRange& r, int target = 5) {
    double span = r.hi - r.lo;
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    std::vector<double> out;
    double first = std::ceil(r.lo / step) * step;
    for (double v = first; v <= r.hi + 1e-12 * span; v += step)
        out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return out;
}

inline void render_panel(std::ostringstream& out, const Panel& panel, double x0, double y0,
                         double w, double h) {
    const double ml = 58, mr = 14, mt = 30, mb = 44;
    const double px0 = x0 + ml, px1 = x0 + w - mr;
    const double py0 = y0 + mt, py1 = y0 + h - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const Series& s : panel.series)
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            xmin = std::min(xmin, s.points[i][0]);
            xmax = std::max(xmax, s.points[i][0]);
            double e = i < s.yerr.size() ? s.yerr[i] : 0.0;
            ymin = std::min(ymin, s.points[i][1] - e);
            ymax = std::max(ymax, s.points[i][1] + e);
        }
    for (double hl : panel.hlines) {
        ymin = std::min(ymin, hl);
        ymax = std::max(ymax, hl);
    }
    if (!std::isfinite(xmin)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    AxisRange xr = nice_range(xmin, xmax);
    AxisRange yr = nice_range(ymin, ymax);

    out << "<rect x='" << px0 << "' y='" << py0 << "' width='" << (px1 - px0) << "' height='"
        << (py1 - py0) << "' fill='white' stroke='#444' stroke-width='1'/>\n";
    out << "<text x='" << (x0 + w / 2) << "' y='" << (y0 + 18)
        << "' text-anchor='middle' font-size='13' font-weight='bold'>" << panel.title
        << "</text>\n";

    for (double t : ticks(xr)) {
        double px = xr.map(t, px0, px1);
        out << "<line x1='" << px << "' y1='" << py1 << "' x2='" << px << "' y2='" << (py1 + 4)
            << "' stroke='#444'/>\n";
        out << "<text x='" << px << "' y='" << (py1 + 16)
            << "' text-anchor='middle' font-size='10'>" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        double py = yr.map(t, py1, py0);
        out << "<line x1='" << (px0 - 4) << "' y1='" << py << "' x2='" << px0 << "' y2='" << py
            << "' stroke='#444'/>\n";
        out << "<text x='" << (px0 - 7) << "' y='" << (py + 3)
            << "' text-anchor='end' font-size='10'>" << fmt(t) << "</text>\n";
        out << "<line x1='" << px0 << "' y1='" << py << "' x2='" << px1 << "' y2='" << py
            << "' stroke='#eee'/>\n";
    }
    out << "<text x='" << (x0 + w / 2) << "' y='" << (y0 + h - 8)
        << "' text-anchor='middle' font-size='11'>" << panel.xlabel << "</text>\n";
    out << "<text x='" << (x0 + 14) << "' y='" << (py0 + (py1 - py0) / 2)
        << "' text-anchor='middle' font-size='11' transform='rotate(-90 " << (x0 + 14) << " "
        << (py0 + (py1 - py0) / 2) << ")'>" << panel.ylabel << "</text>\n";

    for (double hl : panel.hlines) {
        double py = yr.map(hl, py1, py0);
        out << "<line x1='" << px0 << "' y1='" << py << "' x2='" << px1 << "' y2='" << py
            << "' stroke='#999' stroke-dasharray='2,3'/>\n";
    }

    double legend_y = py0 + 12;
    for (const Series& s : panel.series) {
        if (s.points.empty())
            continue;
        std::ostringstream path;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            double px = xr.map(s.points[i][0], px0, px1);
            double py = yr.map(s.points[i][1], py1, py0);
            path << (i ? " L" : "M") << px << ' ' << py;
            if (i < s.yerr.size() && s.yerr[i] > 0.0) {
                double e0 = yr.map(s.points[i][1] - s.yerr[i], py1, py0);
                double e1 = yr.map(s.points[i][1] + s.yerr[i], py1, py0);
                out << "<line x1='" << px << "' y1='" << e0 << "' x2='" << px << "' y2='" << e1
                    << "' stroke='" << s.color << "' stroke-width='1'/>\n";
            }
        }
        if (s.draw_line)
            out << "<path d='" << path.str() << "' fill='none' stroke='" << s.color
                << "' stroke-width='1.5'"
                << (s.dashed ? " stroke-dasharray='5,4'" : "") << "/>\n";
        if (s.draw_markers)
            for (const auto& p : s.points)
                out << "<circle cx='" << xr.map(p[0], px0, px1) << "' cy='"
                    << yr.map(p[1], py1, py0) << "' r='2.5' fill='" << s.color << "'/>\n";
        if (!s.name.empty()) {
            out << "<line x1='" << (px1 - 86) << "' y1='" << legend_y << "' x2='" << (px1 - 70)
                << "' y2='" << legend_y << "' stroke='" << s.color << "' stroke-width='2'"
                << (s.dashed ? " stroke-dasharray='5,4'" : "") << "/>\n";
            out << "<text x='" << (px1 - 66) << "' y='" << (legend_y + 3)
                << "' font-size='10'>" << s.name << "</text>\n";
            legend_y += 13;
        }
    }
}

} // namespace detail

// Renders panels in a grid of `cols` columns.
inline std::string render_figure(const std::vector<Panel>& panels, int cols = 2,
                                 double panel_w = 380, double panel_h = 300) {
    int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
    double W = cols * panel_w, H = rows * panel_h;
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << ' ' << H
        << "' font-family='Helvetica,Arial,sans-serif'>\n";
    out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        double x0 = static_cast<double>(i % cols) * panel_w;
        double y0 = static_cast<double>(i / cols) * panel_h;
        detail::render_panel(out, panels[i], x0, y0, panel_w, panel_h);
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace ctxk::svg

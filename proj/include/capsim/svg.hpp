#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "capsim/capture_map.hpp"
#include "capsim/csv.hpp"
#include "capsim/dynamics.hpp"
#include "capsim/scenario.hpp"

namespace capsim {

// Self-contained SVG writers for the three standard figures: agent
// trajectories, capture-time heatmaps, and boundary overlays. No external
// renderer is assumed beyond an SVG viewer.

namespace svg_detail {

inline const char* palette(int i) {
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#17becf", "#bcbd22", "#e377c2"};
    return colors[i % 8];
}

struct Frame {
    double x0, y0, x1, y1;      // world bounds
    double px = 560, py = 560;  // plot area in pixels
    double margin = 60;

    double sx(double x) const { return margin + (x - x0) / (x1 - x0) * px; }
    double sy(double y) const { return margin + py - (y - y0) / (y1 - y0) * py; }
    double width() const { return px + 2 * margin + 90; }  // room for legend/colorbar
    double height() const { return py + 2 * margin; }
};

inline std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline void open_svg(std::ostringstream& os, const Frame& f, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(f.width())
       << "\" height=\"" << coord(f.height()) << "\" viewBox=\"0 0 " << coord(f.width()) << ' '
       << coord(f.height()) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << coord(f.margin) << "\" y=\"" << coord(f.margin - 24)
       << "\" font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

inline void draw_frame(std::ostringstream& os, const Frame& f) {
    os << "<rect x=\"" << coord(f.margin) << "\" y=\"" << coord(f.margin) << "\" width=\""
       << coord(f.px) << "\" height=\"" << coord(f.py)
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    auto label = [&](double x, double y, const std::string& text, const char* anchor) {
        os << "<text x=\"" << coord(x) << "\" y=\"" << coord(y)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" << anchor << "\">"
           << text << "</text>\n";
    };
    label(f.sx(f.x0), f.margin + f.py + 16, fmt_num(f.x0), "middle");
    label(f.sx(f.x1), f.margin + f.py + 16, fmt_num(f.x1), "middle");
    label(f.margin - 6, f.sy(f.y0) + 4, fmt_num(f.y0), "end");
    label(f.margin - 6, f.sy(f.y1) + 4, fmt_num(f.y1), "end");
}

inline void polyline(std::ostringstream& os, const Frame& f, const std::vector<Vec2>& pts,
                     const std::string& stroke, double width, bool closed,
                     const std::string& dash = "") {
    if (pts.size() < 2) return;
    os << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"" << width << "\"";
    if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    for (const Vec2& p : pts) os << coord(f.sx(p.x)) << ',' << coord(f.sy(p.y)) << ' ';
    os << "\"/>\n";
}

inline void circle(std::ostringstream& os, const Frame& f, Vec2 p, double r,
                   const std::string& fill, const std::string& stroke = "none") {
    os << "<circle cx=\"" << coord(f.sx(p.x)) << "\" cy=\"" << coord(f.sy(p.y)) << "\" r=\"" << r
       << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

inline void cross(std::ostringstream& os, const Frame& f, Vec2 p, double r,
                  const std::string& stroke) {
    const double cx = f.sx(p.x), cy = f.sy(p.y);
    os << "<path d=\"M" << coord(cx - r) << ' ' << coord(cy - r) << " L" << coord(cx + r) << ' '
       << coord(cy + r) << " M" << coord(cx - r) << ' ' << coord(cy + r) << " L" << coord(cx + r)
       << ' ' << coord(cy - r) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
}

inline void legend_entry(std::ostringstream& os, const Frame& f, int slot,
                         const std::string& color, const std::string& text) {
    const double x = f.margin + f.px + 12;
    const double y = f.margin + 14 + 18 * slot;
    os << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(y - 4) << "\" x2=\"" << coord(x + 18)
       << "\" y2=\"" << coord(y - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"/>\n";
    os << "<text x=\"" << coord(x + 22) << "\" y=\"" << coord(y)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << text << "</text>\n";
}

// Five-stop sequential colormap (dark violet to yellow).
inline std::string color_ramp(double u) {
    static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                       {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    const int k = std::min(static_cast<int>(u), 3);
    const double f = u - k;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

}  // namespace svg_detail

/// Trajectory figure: defender paths, intruder path, start markers, target,
/// and the capture point when the run ends in capture.
inline std::string trajectory_svg(const SimulationTrace& trace, const Scenario& scenario) {
    using namespace svg_detail;
    const std::size_t n = scenario.initial_state.defenders.size();

    double x0 = scenario.target.x, x1 = scenario.target.x;
    double y0 = scenario.target.y, y1 = scenario.target.y;
    auto grow = [&](Vec2 p) {
        x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    };
    for (const auto& s : trace.samples) {
        for (const Vec2& p : s.state.defenders) grow(p);
        grow(s.state.intruder);
    }
    const double pad = 0.06 * std::max({x1 - x0, y1 - y0, 1.0});
    Frame f{x0 - pad, y0 - pad, x1 + pad, y1 + pad};

    std::ostringstream os;
    std::string title = "trajectories: ";
    title += outcome_name(trace.outcome.kind);
    title += " at t = " + fmt_num(trace.outcome.time);
    open_svg(os, f, title);

    std::vector<Vec2> path;
    for (std::size_t i = 0; i < n; ++i) {
        path.clear();
        for (const auto& s : trace.samples) path.push_back(s.state.defenders[i]);
        polyline(os, f, path, palette(static_cast<int>(i)), 1.8, false);
        circle(os, f, scenario.initial_state.defenders[i], 4, palette(static_cast<int>(i)));
        legend_entry(os, f, static_cast<int>(i), palette(static_cast<int>(i)),
                     "defender " + std::to_string(i + 1));
    }
    path.clear();
    for (const auto& s : trace.samples) path.push_back(s.state.intruder);
    polyline(os, f, path, "#d62728", 1.8, false, "5,3");
    circle(os, f, scenario.initial_state.intruder, 4, "#d62728");
    legend_entry(os, f, static_cast<int>(n), "#d62728", "intruder");

    circle(os, f, scenario.target, 4, "black");
    if (trace.outcome.kind == OutcomeKind::capture)
        cross(os, f, trace.samples.back().state.intruder, 6, "black");
    draw_frame(os, f);
    os << "</svg>\n";
    return os.str();
}

/// Capture-time heatmap: colored cells for capture times, white for breach,
/// light gray for timeout, boundary polylines and a colorbar.
inline std::string heatmap_svg(const CaptureMap& map, const std::vector<Polyline>& boundary,
                               const Scenario& scenario) {
    using namespace svg_detail;
    const GridSpec& g = map.grid;
    Frame f{g.x_min, g.y_min, g.x_max, g.y_max};

    double t_lo = 0.0, t_hi = 1.0;
    bool any = false;
    for (const CellResult& c : map.cells)
        if (c.kind == OutcomeKind::capture) {
            if (!any) { t_lo = t_hi = c.time; any = true; }
            t_lo = std::min(t_lo, c.time);
            t_hi = std::max(t_hi, c.time);
        }
    if (t_hi <= t_lo) t_hi = t_lo + 1.0;

    std::ostringstream os;
    open_svg(os, f, "capture time by intruder start");
    const double cw = f.px / (g.nx - 1);
    const double ch = f.py / (g.ny - 1);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const CellResult& c = map.at(ix, iy);
            std::string fill;
            if (c.error) fill = "#ff00ff";
            else if (c.kind == OutcomeKind::capture) fill = color_ramp((c.time - t_lo) / (t_hi - t_lo));
            else if (c.kind == OutcomeKind::timeout) fill = "#dddddd";
            else fill = "white";
            os << "<rect x=\"" << coord(f.sx(g.x_at(ix)) - cw / 2) << "\" y=\""
               << coord(f.sy(g.y_at(iy)) - ch / 2) << "\" width=\"" << coord(cw) << "\" height=\""
               << coord(ch) << "\" fill=\"" << fill << "\"/>\n";
        }

    for (const Polyline& line : boundary) polyline(os, f, line.points, "black", 1.6, line.closed);
    for (const Vec2& p : scenario.initial_state.defenders) circle(os, f, p, 4, "black");
    circle(os, f, scenario.target, 3.5, "black", "white");

    // colorbar
    const double bx = f.margin + f.px + 24, bw = 16, bh = f.py * 0.7, by = f.margin + 20;
    const int slices = 32;
    for (int s = 0; s < slices; ++s) {
        const double u = (s + 0.5) / slices;
        os << "<rect x=\"" << coord(bx) << "\" y=\"" << coord(by + bh - (s + 1) * bh / slices)
           << "\" width=\"" << coord(bw) << "\" height=\"" << coord(bh / slices + 0.5)
           << "\" fill=\"" << color_ramp(u) << "\"/>\n";
    }
    os << "<rect x=\"" << coord(bx) << "\" y=\"" << coord(by) << "\" width=\"" << coord(bw)
       << "\" height=\"" << coord(bh) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << coord(bx + bw + 4) << "\" y=\"" << coord(by + bh)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_num(t_lo) << "</text>\n";
    os << "<text x=\"" << coord(bx + bw + 4) << "\" y=\"" << coord(by + 10)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_num(t_hi) << "</text>\n";
    os << "<text x=\"" << coord(bx) << "\" y=\"" << coord(by + bh + 28)
       << "\" font-family=\"sans-serif\" font-size=\"11\">white = breach</text>\n";

    draw_frame(os, f);
    os << "</svg>\n";
    return os.str();
}

/// Boundary overlay for sweeps: one colored boundary set per setting.
inline std::string overlay_svg(const std::vector<SweepResult>& results, const GridSpec& grid,
                               const Scenario& base) {
    using namespace svg_detail;
    Frame f{grid.x_min, grid.y_min, grid.x_max, grid.y_max};
    std::ostringstream os;
    open_svg(os, f, "non-capturable region boundaries");
    int slot = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const std::string color = palette(static_cast<int>(k));
        for (const Polyline& line : results[k].boundary)
            polyline(os, f, line.points, color, 2.0, line.closed);
        legend_entry(os, f, slot++, color,
                     results[k].error ? results[k].label + " (error)" : results[k].label);
    }
    for (const Vec2& p : base.initial_state.defenders) circle(os, f, p, 4, "black");
    circle(os, f, base.target, 3.5, "black", "white");
    draw_frame(os, f);
    os << "</svg>\n";
    return os.str();
}

}  // namespace capsim

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "capsim/capture_map.hpp"
#include "capsim/dynamics.hpp"
#include "capsim/errors.hpp"

namespace capsim {

/// Decimal with 12 significant digits; round-trips every value this tool
/// reports while keeping files readable.
inline std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Trace schema (frozen): t, x1, y1, ..., xN, yN, xi, yi, V
/// where (xi, yi) is the intruder and V the consensus energy.
inline void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
    if (trace.samples.empty()) throw numeric_error("trace has no samples");
    const std::size_t n = trace.samples.front().state.defenders.size();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",x" << i << ",y" << i;
    os << ",x" << n + 1 << ",y" << n + 1 << ",V\n";
    for (const auto& s : trace.samples) {
        os << fmt_num(s.t);
        for (const Vec2& p : s.state.defenders) os << ',' << fmt_num(p.x) << ',' << fmt_num(p.y);
        os << ',' << fmt_num(s.state.intruder.x) << ',' << fmt_num(s.state.intruder.y);
        os << ',' << fmt_num(s.lyapunov) << '\n';
    }
}

struct TraceFile {
    int n_defenders = 0;
    std::vector<double> t;
    std::vector<std::vector<Vec2>> defenders;  // per sample
    std::vector<Vec2> intruder;
    std::vector<double> lyapunov;
};

inline TraceFile read_trace_csv(std::istream& is) {
    TraceFile out;
    std::string line;
    if (!std::getline(is, line)) throw config_error("parse_error", "trace: empty file");
    int columns = 1;
    for (char c : line) columns += c == ',';
    if (columns < 6 || (columns - 2) % 2 != 0)
        throw config_error("parse_error", "trace: unexpected header '" + line + "'");
    out.n_defenders = (columns - 2) / 2 - 1;

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(row, field, ',')) vals.push_back(std::stod(field));
        if (static_cast<int>(vals.size()) != columns)
            throw config_error("parse_error", "trace: ragged row '" + line + "'");
        out.t.push_back(vals[0]);
        std::vector<Vec2> defs;
        for (int i = 0; i < out.n_defenders; ++i) defs.push_back({vals[1 + 2 * i], vals[2 + 2 * i]});
        out.defenders.push_back(std::move(defs));
        out.intruder.push_back({vals[columns - 3], vals[columns - 2]});
        out.lyapunov.push_back(vals[columns - 1]);
    }
    if (out.t.empty()) throw config_error("parse_error", "trace: no data rows");
    return out;
}

/// Map schema (frozen): x, y, class, t_star. `t_star` is the capture time
/// for capture cells, the breach time for breach cells, and the horizon for
/// timeout cells; `class` keeps them distinguishable.
inline void write_map_csv(std::ostream& os, const CaptureMap& map) {
    os << "x,y,class,t_star\n";
    for (int iy = 0; iy < map.grid.ny; ++iy)
        for (int ix = 0; ix < map.grid.nx; ++ix) {
            const CellResult& c = map.at(ix, iy);
            os << fmt_num(map.grid.x_at(ix)) << ',' << fmt_num(map.grid.y_at(iy)) << ','
               << (c.error ? "error" : outcome_name(c.kind)) << ',' << fmt_num(c.time) << '\n';
        }
}

/// Boundary schema (frozen): polyline, vertex, x, y. Closed polylines
/// repeat their first vertex at the end.
inline void write_boundary_csv(std::ostream& os, const std::vector<Polyline>& lines) {
    os << "polyline,vertex,x,y\n";
    for (std::size_t p = 0; p < lines.size(); ++p) {
        int v = 0;
        for (const Vec2& pt : lines[p].points)
            os << p << ',' << v++ << ',' << fmt_num(pt.x) << ',' << fmt_num(pt.y) << '\n';
        if (lines[p].closed && !lines[p].points.empty())
            os << p << ',' << v << ',' << fmt_num(lines[p].points.front().x) << ','
               << fmt_num(lines[p].points.front().y) << '\n';
    }
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("io_error", "cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw config_error("io_error", "failed writing '" + path + "'");
}

}  // namespace capsim

#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "capsim/dynamics.hpp"
#include "capsim/scenario.hpp"

namespace capsim {

/// Rectangular lattice of intruder start positions, endpoints inclusive.
/// Every map cell runs with the same t_max so the outcome classes are
/// comparable across the grid.
struct GridSpec {
    double x_min = -15.0, x_max = 15.0;
    double y_min = -15.0, y_max = 15.0;
    int nx = 81, ny = 81;
    double cell_t_max = 200.0;

    double x_at(int ix) const {
        return nx > 1 ? x_min + ix * (x_max - x_min) / (nx - 1) : x_min;
    }
    double y_at(int iy) const {
        return ny > 1 ? y_min + iy * (y_max - y_min) / (ny - 1) : y_min;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CellResult {
    OutcomeKind kind = OutcomeKind::timeout;
    double time = 0.0;
    bool error = false;

    friend bool operator==(const CellResult&, const CellResult&) = default;
};

struct CaptureMap {
    GridSpec grid;
    std::vector<CellResult> cells;  // row-major, index = iy * nx + ix

    const CellResult& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    /// Breach-class cells: breach and timeout both count as non-capturable
    /// for boundary purposes; the distinction is preserved in the data.
    bool breach_class(int ix, int iy) const { return at(ix, iy).kind != OutcomeKind::capture; }

    friend bool operator==(const CaptureMap&, const CaptureMap&) = default;
};

inline int breach_class_count(const CaptureMap& map) {
    int n = 0;
    for (const CellResult& c : map.cells) n += c.kind != OutcomeKind::capture;
    return n;
}

/// Run the scenario once per lattice point with the intruder starting
/// there. Cells are independent; they are distributed over `jobs` worker
/// threads (0 = hardware concurrency) and written each exactly once, so the
/// result does not depend on evaluation order. Per-cell failures are marked
/// on the cell instead of aborting the sweep.
inline CaptureMap compute_capture_map(const Scenario& base, const GridSpec& grid, int jobs = 0) {
    validate_scenario(base);
    if (!base.allow_assumption_violations) {
        const AssumptionReport rep = validate_assumptions(base.graph);
        if (!rep.pass())
            throw config_error("assumptions_violated", "capture map: scenario assumptions violated");
    }
    const CaptureMatrixSet cm = build_capture_matrices(base.graph);

    CaptureMap map;
    map.grid = grid;
    map.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, CellResult{});

    Scenario cell_base = base;
    cell_base.numerics.t_max = grid.cell_t_max;
    cell_base.numerics.sample_stride = 0;

    std::atomic<int> next{0};
    const int total = grid.nx * grid.ny;
    auto worker = [&]() {
        Scenario local = cell_base;
        while (true) {
            const int idx = next.fetch_add(1);
            if (idx >= total) break;
            const int ix = idx % grid.nx;
            const int iy = idx / grid.nx;
            local.initial_state.intruder = {grid.x_at(ix), grid.y_at(iy)};
            CellResult cell;
            try {
                const SimulationTrace trace = simulate(local, cm);
                cell.kind = trace.outcome.kind;
                cell.time = trace.outcome.time;
            } catch (const std::exception&) {
                cell.error = true;
            }
            map.cells[idx] = cell;
        }
    };

    int n_workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return map;
}

struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;
};

namespace detail {

// Marching-squares case table. Corner bits (1 = breach class):
// bit0 = (ix, iy), bit1 = (ix+1, iy), bit2 = (ix+1, iy+1), bit3 = (ix, iy+1).
// Edge ids: 0 = bottom, 1 = right, 2 = top, 3 = left. Ambiguous saddles
// (cases 5 and 10) use the fixed "separated" resolution.
inline const std::vector<std::pair<int, int>>& ms_segments(int pattern) {
    static const std::vector<std::pair<int, int>> table[16] = {
        {},                  // 0000
        {{3, 0}},            // 0001
        {{0, 1}},            // 0010
        {{3, 1}},            // 0011
        {{1, 2}},            // 0100
        {{3, 0}, {1, 2}},    // 0101 saddle
        {{0, 2}},            // 0110
        {{3, 2}},            // 0111
        {{2, 3}},            // 1000
        {{0, 2}},            // 1001
        {{0, 1}, {2, 3}},    // 1010 saddle
        {{1, 2}},            // 1011
        {{1, 3}},            // 1100
        {{0, 1}},            // 1101
        {{3, 0}},            // 1110
        {},                  // 1111
    };
    return table[pattern];
}

// Edge midpoints on a doubled integer lattice, exact keys for stitching.
inline std::pair<int, int> ms_edge_key(int ix, int iy, int edge) {
    switch (edge) {
        case 0: return {2 * ix + 1, 2 * iy};      // bottom
        case 1: return {2 * ix + 2, 2 * iy + 1};  // right
        case 2: return {2 * ix + 1, 2 * iy + 2};  // top
        default: return {2 * ix, 2 * iy + 1};     // left
    }
}

}  // namespace detail

/// Contour between capture cells and breach-class cells, built by marching
/// squares on the lattice with midpoint vertices. Polylines are closed
/// where the region is interior to the grid and carry a deterministic
/// vertex order (chains start at their smallest doubled-lattice key).
/// Returns an empty set for a single-class map.
inline std::vector<Polyline> extract_boundary(const CaptureMap& map) {
    using Key = std::pair<int, int>;
    const GridSpec& g = map.grid;

    std::map<Key, std::vector<Key>> adjacency;
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const int pattern = (map.breach_class(ix, iy) ? 1 : 0) |
                                (map.breach_class(ix + 1, iy) ? 2 : 0) |
                                (map.breach_class(ix + 1, iy + 1) ? 4 : 0) |
                                (map.breach_class(ix, iy + 1) ? 8 : 0);
            for (const auto& [e1, e2] : detail::ms_segments(pattern)) {
                const Key a = detail::ms_edge_key(ix, iy, e1);
                const Key b = detail::ms_edge_key(ix, iy, e2);
                adjacency[a].push_back(b);
                adjacency[b].push_back(a);
            }
        }
    }

    auto to_world = [&](const Key& k) -> Vec2 {
        const double dx = g.nx > 1 ? (g.x_max - g.x_min) / (g.nx - 1) : 0.0;
        const double dy = g.ny > 1 ? (g.y_max - g.y_min) / (g.ny - 1) : 0.0;
        return {g.x_min + 0.5 * k.first * dx, g.y_min + 0.5 * k.second * dy};
    };

    std::vector<Polyline> out;
    std::map<Key, std::vector<Key>> remaining = adjacency;
    auto consume_edge = [&](const Key& from, const Key& to) {
        auto& fwd = remaining[from];
        fwd.erase(std::find(fwd.begin(), fwd.end(), to));
        auto& back = remaining[to];
        back.erase(std::find(back.begin(), back.end(), from));
    };

    auto walk = [&](const Key& start) {
        Polyline line;
        std::vector<Key> keys{start};
        Key cur = start;
        while (!remaining[cur].empty()) {
            // Deterministic: always follow the smallest available neighbour.
            Key nxt = *std::min_element(remaining[cur].begin(), remaining[cur].end());
            consume_edge(cur, nxt);
            keys.push_back(nxt);
            cur = nxt;
            if (cur == start) break;
        }
        line.closed = keys.size() > 2 && keys.front() == keys.back();
        if (line.closed) keys.pop_back();
        line.points.reserve(keys.size());
        for (const Key& k : keys) line.points.push_back(to_world(k));
        return line;
    };

    // Open chains first (endpoints of odd degree), then loops.
    for (auto& [key, nbrs] : remaining)
        if (nbrs.size() == 1) out.push_back(walk(key));
    for (auto& [key, nbrs] : remaining)
        while (!nbrs.empty()) out.push_back(walk(key));
    return out;
}

enum class SweepParameter { defender_speed, sensing, edges };

struct SweepSetting {
    std::string label;
    Scenario scenario;
};

struct SweepSpec {
    SweepParameter parameter = SweepParameter::defender_speed;
    std::vector<SweepSetting> settings;
};

struct SweepResult {
    std::string label;
    CaptureMap map;
    std::vector<Polyline> boundary;
    bool error = false;
    std::string message;
};

/// Evaluate each sweep setting independently on the same grid; a failing
/// setting is reported in place without aborting the others.
inline std::vector<SweepResult> run_sweep(const SweepSpec& spec, const GridSpec& grid,
                                          int jobs = 0) {
    if (spec.settings.empty())
        throw config_error("empty_sweep", "sweep: at least one setting is required");
    std::vector<SweepResult> results;
    results.reserve(spec.settings.size());
    for (const SweepSetting& setting : spec.settings) {
        SweepResult r;
        r.label = setting.label;
        try {
            r.map = compute_capture_map(setting.scenario, grid, jobs);
            r.boundary = extract_boundary(r.map);
        } catch (const std::exception& e) {
            r.error = true;
            r.message = e.what();
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace capsim

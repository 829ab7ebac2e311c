#pragma once

// Shared helpers for the test suites: reference scenario builders,
// deterministic random ensembles, and independent oracles (kept here so
// they cannot depend on the library's own closed forms).

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "capsim/capsim.hpp"

namespace testsupport {

using namespace capsim;

inline Matrix complete_graph_weights(int n, double w = 1.0) {
    Matrix m(n, n, w);
    for (int i = 0; i < n; ++i) m(i, i) = 0.0;
    return m;
}

inline CommGraph complete_graph(int n, std::vector<int> sensing) {
    return make_comm_graph(complete_graph_weights(n), std::move(sensing));
}

/// Four defenders on the square corners, unit speeds, complete graph, all
/// sensing; slow direct intruder from (-5, 10).
inline Scenario homogeneous_scenario() {
    Scenario s;
    s.graph = complete_graph(4, {1, 1, 1, 1});
    s.defender_speeds = {1.0, 1.0, 1.0, 1.0};
    s.initial_state.defenders = {{5, 5}, {-5, -5}, {-5, 5}, {5, -5}};
    s.initial_state.intruder = {-5, 10};
    s.intruder_speed = 0.1;
    s.numerics.t_max = 200.0;
    return s;
}

/// Same square, heterogeneous speeds, defenders 1-2 not communicating,
/// only defenders 1 and 4 sensing.
inline Scenario heterogeneous_scenario() {
    Scenario s;
    Matrix w = complete_graph_weights(4);
    w(0, 1) = w(1, 0) = 0.0;
    s.graph = make_comm_graph(std::move(w), {1, 0, 0, 1});
    s.defender_speeds = {1.3, 1.4, 1.5, 1.4};
    s.initial_state.defenders = {{5, 5}, {-5, -5}, {-5, 5}, {5, -5}};
    s.initial_state.intruder = {-5, 10};
    s.intruder_speed = 0.1;
    s.numerics.t_max = 200.0;
    return s;
}

/// Map configuration: homogeneous team against a faster (0.5) intruder.
inline Scenario map_scenario() {
    Scenario s = homogeneous_scenario();
    s.intruder_speed = 0.5;
    return s;
}

/// Connected random graph: random spanning tree plus extra edges, weights
/// uniform in (0, 2], random 0/1 sensing with at least one sensor.
inline CommGraph random_connected_graph(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> weight(0.01, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix w(n, n);
    for (int i = 1; i < n; ++i) {
        const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
        w(i, j) = w(j, i) = weight(rng);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (w(i, j) == 0.0 && unit(rng) < 0.3) w(i, j) = w(j, i) = weight(rng);
    std::vector<int> sensing(n, 0);
    for (int i = 0; i < n; ++i) sensing[i] = unit(rng) < 0.5 ? 1 : 0;
    if (std::none_of(sensing.begin(), sensing.end(), [](int b) { return b == 1; }))
        sensing[std::uniform_int_distribution<int>(0, n - 1)(rng)] = 1;
    return make_comm_graph(std::move(w), std::move(sensing));
}

/// Random scenario with a strictly positive rate constant c and a bounded
/// certificate, for dominance-style ensembles.
inline Scenario random_positive_rate_scenario(std::mt19937& rng, int n_min = 2, int n_max = 8,
                                              double max_bound = 400.0) {
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> speed(0.8, 1.6);
    std::uniform_real_distribution<double> ratio(0.1, 0.6);
    while (true) {
        const int n = std::uniform_int_distribution<int>(n_min, n_max)(rng);
        Scenario s;
        s.graph = random_connected_graph(rng, n);
        for (int i = 0; i < n; ++i) {
            s.defender_speeds.push_back(speed(rng));
            s.initial_state.defenders.push_back({coord(rng), coord(rng)});
        }
        s.initial_state.intruder = {coord(rng), coord(rng)};
        if (norm(s.initial_state.intruder) < 0.5) continue;  // keep away from the target

        const CaptureMatrixSet cm = build_capture_matrices(s.graph);
        const double v_min = *std::min_element(s.defender_speeds.begin(), s.defender_speeds.end());
        s.intruder_speed = ratio(rng) * v_min * std::sqrt(cm.lambda_min_w) /
                           std::sqrt(static_cast<double>(cm.m));
        if (!(s.intruder_speed > 1e-6)) continue;

        s.numerics.dt = 2e-3;
        const CaptureCertificate cert = capture_time_bound(s, cm);
        if (!cert.t_star_bound || *cert.t_star_bound > max_bound) continue;
        s.numerics.t_max = 4.0 * *cert.t_star_bound;
        return s;
    }
}

/// Brute-force minimization of (a + c(|g| - d)^2) / (g^2 + 1): dense grid
/// over [0, 1000], one local refinement pass, plus the tail limit c (the
/// profile approaches c as g grows without bound).
inline double grid_profile_min(double a, double c, double d, bool refine = true) {
    auto f = [&](double g) { return (a + c * (std::abs(g) - d) * (std::abs(g) - d)) / (g * g + 1.0); };
    const int n1 = 1'000'000;
    const double hi = 1000.0;
    double best = std::numeric_limits<double>::infinity();
    double best_g = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double g = hi * i / (n1 - 1);
        const double v = f(g);
        if (v < best) { best = v; best_g = g; }
    }
    if (refine) {
        const double dg = hi / (n1 - 1);
        const double lo2 = std::max(0.0, best_g - 2.0 * dg);
        const int n2 = 200'000;
        for (int i = 0; i < n2; ++i) {
            const double g = lo2 + 4.0 * dg * i / (n2 - 1);
            best = std::min(best, f(g));
        }
        best = std::min(best, c);  // tail limit
    }
    return best;
}

/// Kronecker-product route to the consensus energy, independent of the
/// library's summed quadratic form: xi^T (W (x) I2) xi with the 2N x 2N
/// matrix assembled explicitly.
inline double kron_energy(const AgentState& s, const Matrix& w) {
    const int n = w.rows();
    std::vector<double> xi(2 * n);
    for (int i = 0; i < n; ++i) {
        xi[2 * i] = s.defenders[i].x - s.intruder.x;
        xi[2 * i + 1] = s.defenders[i].y - s.intruder.y;
    }
    Matrix big(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            big(2 * i, 2 * j) = w(i, j);
            big(2 * i + 1, 2 * j + 1) = w(i, j);
        }
    double v = 0.0;
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) v += xi[i] * big(i, j) * xi[j];
    return v;
}

inline bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i].y > p.y) != (poly[j].y > p.y) &&
            p.x < (poly[j].x - poly[i].x) * (p.y - poly[i].y) / (poly[j].y - poly[i].y) + poly[i].x)
            inside = !inside;
    }
    return inside;
}

}  // namespace testsupport

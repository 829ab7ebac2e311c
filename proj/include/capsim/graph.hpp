#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "capsim/eigen.hpp"
#include "capsim/errors.hpp"
#include "capsim/matrix.hpp"

namespace capsim {

/// Communication and sensing structure of the defender team.
///
/// `weights(i,j)` is the communication gain from defender j+1 to defender
/// i+1 (indices are 0-based in code, 1-based in files and error messages).
/// The matrix is symmetric with a zero diagonal; `sensing[i]` is 1 when
/// defender i+1 can observe the intruder. Construct through
/// `make_comm_graph` or `graph_from_edges`, which enforce the invariants.
struct CommGraph {
    Matrix weights;
    std::vector<int> sensing;

    int size() const { return weights.rows(); }
    int sensing_count() const {
        int m = 0;
        for (int b : sensing) m += b;
        return m;
    }
};

inline CommGraph make_comm_graph(Matrix weights, std::vector<int> sensing) {
    const int n = weights.rows();
    if (n == 0 || weights.cols() != n)
        throw config_error("bad_dimensions", "graph: weight matrix must be square and non-empty");
    if (static_cast<int>(sensing.size()) != n)
        throw config_error("bad_dimensions", "graph: sensing vector length " +
                                                 std::to_string(sensing.size()) +
                                                 " does not match team size " + std::to_string(n));
    for (int i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0)
            throw config_error("nonzero_diagonal", "graph: weight (" + std::to_string(i + 1) + "," +
                                                       std::to_string(i + 1) + ") must be zero");
        for (int j = 0; j < n; ++j) {
            if (weights(i, j) < 0.0 || !std::isfinite(weights(i, j)))
                throw config_error("negative_weight",
                                   "graph: weight (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + ") must be a finite nonnegative real");
            if (j > i && weights(i, j) != weights(j, i))
                throw config_error("asymmetric_weights",
                                   "graph: weight (" + std::to_string(i + 1) + "," +
                                       std::to_string(j + 1) + ") differs from (" +
                                       std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
        }
    }
    for (std::size_t i = 0; i < sensing.size(); ++i)
        if (sensing[i] != 0 && sensing[i] != 1)
            throw config_error("bad_sensing", "graph: sensing[" + std::to_string(i + 1) +
                                                  "] must be 0 or 1");
    return CommGraph{std::move(weights), std::move(sensing)};
}

/// Build a graph from an undirected edge list with 0-based endpoints.
inline CommGraph graph_from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges,
                                  std::vector<int> sensing) {
    Matrix w(n, n);
    for (const auto& [i, j, wt] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw config_error("bad_edge", "graph: edge (" + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + ") is outside 1.." +
                                               std::to_string(n));
        if (i == j)
            throw config_error("bad_edge",
                               "graph: self-loop at defender " + std::to_string(i + 1));
        w(i, j) = wt;
        w(j, i) = wt;
    }
    return make_comm_graph(std::move(w), std::move(sensing));
}

/// Connectivity of the graph induced by strictly positive weights,
/// decided by traversal.
inline bool graph_connected(const CommGraph& g) {
    const int n = g.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && g.weights(i, j) > 0.0) {
                seen[j] = 1;
                ++count;
                stack.push_back(j);
            }
        }
    }
    return count == n;
}

/// Interaction matrices of the capture dynamics with cached spectra.
/// w_full = w_comm + w_sense, where w_comm is the weighted communication
/// Laplacian and w_sense = diag(sensing).
struct CaptureMatrixSet {
    Matrix w_full;
    Matrix w_comm;
    Matrix w_sense;
    int m = 0;                          // number of sensing defenders
    double lambda_min_w = 0.0;          // smallest eigenvalue of w_full
    std::optional<double> lambda2_w1;   // second-smallest eigenvalue of w_comm; absent for N = 1
    bool connected = false;             // traversal result, cached at build time

    int size() const { return w_full.rows(); }
};

inline CaptureMatrixSet build_capture_matrices(const CommGraph& graph) {
    // Re-validate so raw aggregate-constructed graphs are caught too.
    const CommGraph& g = graph;
    make_comm_graph(g.weights, g.sensing);

    const int n = g.size();
    CaptureMatrixSet cm;
    cm.w_comm = Matrix(n, n);
    cm.w_sense = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            cm.w_comm(i, j) = -g.weights(i, j);
            row_sum += g.weights(i, j);
        }
        cm.w_comm(i, i) = row_sum;
        cm.w_sense(i, i) = static_cast<double>(g.sensing[i]);
    }
    cm.w_full = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cm.w_full(i, j) = cm.w_comm(i, j) + cm.w_sense(i, j);

    cm.m = g.sensing_count();
    cm.lambda_min_w = symmetric_eigenvalues(cm.w_full).front();
    if (n >= 2) cm.lambda2_w1 = symmetric_eigenvalues(cm.w_comm)[1];
    cm.connected = graph_connected(g);
    return cm;
}

/// Per-assumption validation report. `pass()` is decided by traversal
/// connectivity, symmetry, and the sensing count; the algebraic
/// connectivity is recorded as a cross-check only.
struct AssumptionReport {
    int n = 0;
    int m = 0;
    bool symmetric_ok = false;
    bool connected = false;
    bool sensing_ok = false;
    std::optional<double> lambda2_w1;
    bool lambda2_agrees = true;  // traversal vs lambda2 > tol cross-check

    bool pass() const { return symmetric_ok && connected && sensing_ok; }
};

inline AssumptionReport validate_assumptions(const CommGraph& g) {
    AssumptionReport r;
    r.n = g.size();
    r.m = g.sensing_count();
    r.symmetric_ok = is_symmetric(g.weights, 0.0);
    r.connected = graph_connected(g);
    r.sensing_ok = r.m >= 1;
    if (r.n >= 2) {
        Matrix w1(r.n, r.n);
        for (int i = 0; i < r.n; ++i) {
            double row = 0.0;
            for (int j = 0; j < r.n; ++j) {
                if (i == j) continue;
                w1(i, j) = -g.weights(i, j);
                row += g.weights(i, j);
            }
            w1(i, i) = row;
        }
        r.lambda2_w1 = symmetric_eigenvalues(w1)[1];
        r.lambda2_agrees = (*r.lambda2_w1 > 1e-9) == r.connected;
    }
    return r;
}

}  // namespace capsim

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "capsim/errors.hpp"
#include "capsim/matrix.hpp"

namespace capsim {

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k pairs with values[k]; empty unless requested
};

/// Cyclic Jacobi rotations for a symmetric matrix. Converges when the
/// off-diagonal Frobenius norm drops below 1e-12 * ||A||_F. Robust and
/// simple; the matrices here are small, so speed is not a concern.
inline EigenDecomposition jacobi_eigen(Matrix a, bool with_vectors = false) {
    const int n = a.rows();
    if (n == 0 || a.cols() != n) throw numeric_error("jacobi_eigen: matrix must be square and non-empty");

    Matrix v;
    if (with_vectors) v = Matrix::identity(n);

    const double scale = frobenius_norm(a);
    const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
    constexpr int max_sweeps = 128;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                if (with_vectors) {
                    for (int k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal_norm(a) > tol)
        throw numeric_error("jacobi_eigen: failed to converge");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    for (int k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
    if (with_vectors) {
        out.vectors = Matrix(n, n);
        for (int k = 0; k < n; ++k)
            for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// Eigenvalues of a symmetric matrix, sorted ascending. Rejects input whose
/// asymmetry exceeds 1e-12 (absolute, entrywise); smaller asymmetry is
/// averaged away before the solve.
inline std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw numeric_error("symmetric_eigenvalues: matrix must be square");
    if (!is_symmetric(a, 1e-12)) throw numeric_error("symmetric_eigenvalues: matrix is not symmetric");
    Matrix sym = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            sym(i, j) = m;
            sym(j, i) = m;
        }
    return jacobi_eigen(std::move(sym), false).values;
}

}  // namespace capsim

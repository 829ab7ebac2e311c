#pragma once

#include <cmath>
#include <limits>

#include "capsim/errors.hpp"
#include "capsim/graph.hpp"

namespace capsim {

struct ProfileMinimum {
    double gamma = 0.0;  // argmin; +infinity when the infimum is the tail limit
    double value = 0.0;
};

/// Exact minimum over all real gamma of
///
///     f(gamma) = (a + c * (|gamma| - d)^2) / (gamma^2 + 1),
///
/// for a >= 0, c > 0, d >= 0. f is even, so only gamma >= 0 matters. The
/// candidates are the boundary f(0), the tail limit f -> c as gamma -> inf,
/// and the stationary point of the smooth branch: setting the derivative's
/// numerator to zero gives  c*d*g^2 + (c - c*d^2 - a)*g - c*d = 0,  whose
/// product of roots is -1, so exactly one root is nonnegative.
inline ProfileMinimum minimize_shifted_rayleigh(double a, double c, double d) {
    ProfileMinimum best{0.0, a + c * d * d};  // f(0)
    const double limit = c;
    if (limit < best.value) best = {std::numeric_limits<double>::infinity(), limit};
    if (c * d > 0.0) {
        const double b = c - c * d * d - a;
        const double disc = b * b + 4.0 * c * d * c * d;
        const double g = (-b + std::sqrt(disc)) / (2.0 * c * d);
        if (g >= 0.0) {
            const double fg = (a + c * (g - d) * (g - d)) / (g * g + 1.0);
            if (fg < best.value) best = {g, fg};
        }
    }
    return best;
}

/// Closed-form lower bound on the smallest eigenvalue of w_full, valid for
/// a connected graph with at least one sensing defender. The bound is
///
///     min over gamma of (lambda2(w_comm) + (m/N)(|gamma| - sqrt((N-m)/m))^2) / (gamma^2 + 1),
///
/// never exceeding lambda_min(w_full). For a single defender the
/// communication Laplacian is degenerate and the eigenvalue itself is
/// returned.
inline double min_eigenvalue_lower_bound(const CaptureMatrixSet& cm) {
    const int n = cm.size();
    if (cm.m < 1)
        throw infeasible_error("eigenvalue bound requires at least one sensing defender (m >= 1)");
    if (!cm.connected)
        throw infeasible_error("eigenvalue bound requires a connected communication graph");
    if (n == 1) return cm.w_full(0, 0);

    const double a = *cm.lambda2_w1;
    const double c = static_cast<double>(cm.m) / n;
    const double d = cm.m < n ? std::sqrt(static_cast<double>(n - cm.m) / cm.m) : 0.0;
    return minimize_shifted_rayleigh(a, c, d).value;
}

}  // namespace capsim

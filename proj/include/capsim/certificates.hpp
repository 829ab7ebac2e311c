#pragma once

#include <cmath>
#include <optional>

#include "capsim/dynamics.hpp"
#include "capsim/graph.hpp"
#include "capsim/scenario.hpp"
#include "capsim/spectral_bound.hpp"

namespace capsim {

/// One boolean condition with its margin. `applicable` is false when the
/// condition is undefined for this scenario (intruder already at the
/// target, no sensing defender, disconnected graph).
struct ConditionCheck {
    bool applicable = true;
    bool ok = false;
    double slack = 0.0;

    friend bool operator==(const ConditionCheck&, const ConditionCheck&) = default;
};

/// Pre-run guarantees for a scenario: the consensus-rate constant c, the
/// initial consensus energy V(0), the capture-time bound sqrt(V(0))/c when
/// c > 0, and the three sufficient conditions (time form, speed-ratio form,
/// and the spectral-bound form that needs no eigensolve of w_full).
struct CaptureCertificate {
    double c = 0.0;
    double v0 = 0.0;
    double lambda_min_w = 0.0;
    int m = 0;
    std::optional<double> t_star_bound;  // empty = infeasible (c <= 0)
    ConditionCheck sufficient_capture;   // sqrt(V0) / (dist/v_intruder) <= c
    ConditionCheck speed_ratio;          // v_min/v_intruder >= alpha / sqrt(lambda_min)
    ConditionCheck spectral_speed;       // v_min^2 * profile >= v_intruder^2 * alpha^2
};

inline double min_defender_speed(const Scenario& s) {
    double v = s.defender_speeds.front();
    for (double vi : s.defender_speeds) v = std::min(v, vi);
    return v;
}

/// c = v_min sqrt(lambda_min(W)) - v_intruder sqrt(m); the bound
/// sqrt(V(0))/c is finite iff c > 0.
inline CaptureCertificate capture_time_bound(const Scenario& scenario,
                                             const CaptureMatrixSet& cm) {
    CaptureCertificate cert;
    cert.m = cm.m;
    cert.lambda_min_w = cm.lambda_min_w;
    cert.v0 = lyapunov_value(scenario.initial_state, cm);
    cert.c = min_defender_speed(scenario) * std::sqrt(std::max(cm.lambda_min_w, 0.0)) -
             scenario.intruder_speed * std::sqrt(static_cast<double>(cm.m));
    if (cert.c > 0.0) cert.t_star_bound = std::sqrt(cert.v0) / cert.c;
    return cert;
}

namespace detail {

/// alpha = sqrt(V(0)) / dist(intruder, target) + sqrt(m).
inline double alpha_coefficient(const Scenario& scenario, const CaptureMatrixSet& cm) {
    const double v0 = lyapunov_value(scenario.initial_state, cm);
    const double dist = norm(scenario.initial_state.intruder - scenario.target);
    return std::sqrt(v0) / dist + std::sqrt(static_cast<double>(cm.m));
}

}  // namespace detail

/// Time-form sufficient condition for capture before breach:
/// sqrt(V(0)) / (dist / v_intruder) <= c. Degenerate (not applicable) when
/// the intruder already stands on the target.
inline ConditionCheck sufficient_condition_capture(const Scenario& scenario,
                                                   const CaptureMatrixSet& cm) {
    ConditionCheck check;
    const double dist = norm(scenario.initial_state.intruder - scenario.target);
    if (dist <= scenario.numerics.eps_target) {
        check.applicable = false;
        return check;
    }
    const CaptureCertificate base = capture_time_bound(scenario, cm);
    const double lhs = std::sqrt(base.v0) / (dist / scenario.intruder_speed);
    check.ok = lhs <= base.c;
    check.slack = base.c - lhs;
    return check;
}

/// Speed-ratio form of the same condition:
/// v_min / v_intruder >= alpha / sqrt(lambda_min(W)).
inline ConditionCheck speed_ratio_condition(const Scenario& scenario,
                                            const CaptureMatrixSet& cm) {
    ConditionCheck check;
    const double dist = norm(scenario.initial_state.intruder - scenario.target);
    if (dist <= scenario.numerics.eps_target) {
        check.applicable = false;
        return check;
    }
    const double alpha = detail::alpha_coefficient(scenario, cm);
    const double lhs = min_defender_speed(scenario) / scenario.intruder_speed;
    const double rhs = alpha / std::sqrt(cm.lambda_min_w);
    check.ok = lhs >= rhs;
    check.slack = lhs - rhs;
    return check;
}

/// Spectral-bound speed condition: replaces lambda_min(W) with the
/// closed-form profile minimum
///
///   v_min^2 * min over gamma of
///       (lambda2(w_comm)/m + (1/N)(|gamma| - sqrt((N-m)/m))^2) / (gamma^2 + 1)
///   >= v_intruder^2 * alpha^2.
///
/// The minimand equals the eigenvalue-bound minimand divided by m, making
/// this the most conservative check of the three.
inline ConditionCheck spectral_speed_condition(const Scenario& scenario,
                                               const CaptureMatrixSet& cm) {
    ConditionCheck check;
    const double dist = norm(scenario.initial_state.intruder - scenario.target);
    if (cm.m < 1 || !cm.connected || dist <= scenario.numerics.eps_target) {
        check.applicable = false;
        return check;
    }
    const int n = cm.size();
    double profile;
    if (n == 1) {
        profile = cm.w_full(0, 0) / cm.m;
    } else {
        const double a = *cm.lambda2_w1 / cm.m;
        const double c = 1.0 / n;
        const double d = cm.m < n ? std::sqrt(static_cast<double>(n - cm.m) / cm.m) : 0.0;
        profile = minimize_shifted_rayleigh(a, c, d).value;
    }
    const double alpha = detail::alpha_coefficient(scenario, cm);
    const double vmin = min_defender_speed(scenario);
    const double lhs = vmin * vmin * profile;
    const double rhs = scenario.intruder_speed * scenario.intruder_speed * alpha * alpha;
    check.ok = lhs >= rhs;
    check.slack = lhs - rhs;
    return check;
}

inline CaptureCertificate evaluate_certificate(const Scenario& scenario,
                                               const CaptureMatrixSet& cm) {
    CaptureCertificate cert = capture_time_bound(scenario, cm);
    cert.sufficient_capture = sufficient_condition_capture(scenario, cm);
    cert.speed_ratio = speed_ratio_condition(scenario, cm);
    cert.spectral_speed = spectral_speed_condition(scenario, cm);
    return cert;
}

/// Post-hoc check that sqrt(V(t)) <= sqrt(V(0)) - c t held along a trace,
/// up to the discretization slack tau_num = 10 c dt. Applies to any
/// intruder policy; not applicable when c <= 0. A timeout despite c > 0 is
/// flagged as a numerics alert (dt or eps_capture too coarse), not a
/// certificate failure.
struct RateReport {
    bool applicable = false;
    bool pass = false;
    double max_violation = 0.0;
    double tau_num = 0.0;
    int samples_checked = 0;
    bool numerics_alert = false;
};

inline RateReport verify_consensus_rate(const SimulationTrace& trace,
                                        const CaptureCertificate& cert, double dt) {
    RateReport report;
    if (cert.c <= 0.0 || trace.samples.empty()) return report;
    report.applicable = true;
    report.tau_num = 10.0 * cert.c * dt;

    const double sqrt_v0 = std::sqrt(trace.samples.front().lyapunov);
    const double t_end = trace.outcome.kind == OutcomeKind::capture
                             ? trace.outcome.time
                             : trace.samples.back().t;
    for (const auto& sample : trace.samples) {
        if (sample.t > t_end) break;
        const double violation = std::sqrt(std::max(sample.lyapunov, 0.0)) -
                                 (sqrt_v0 - cert.c * sample.t);
        report.max_violation = std::max(report.max_violation, violation);
        ++report.samples_checked;
    }
    report.pass = report.max_violation <= report.tau_num;
    report.numerics_alert = trace.outcome.kind == OutcomeKind::timeout;
    return report;
}

}  // namespace capsim

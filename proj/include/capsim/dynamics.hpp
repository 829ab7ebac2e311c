#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "capsim/geometry.hpp"
#include "capsim/graph.hpp"
#include "capsim/scenario.hpp"

namespace capsim {

/// Sum of defender-to-intruder distances; zero exactly at simultaneous capture.
inline double distance_sum(const AgentState& s) {
    double sum = 0.0;
    for (const Vec2& d : s.defenders) sum += norm(d - s.intruder);
    return sum;
}

/// True when every defender is within eps of the intruder at this instant.
inline bool all_within(const AgentState& s, double eps) {
    for (const Vec2& d : s.defenders)
        if (norm(d - s.intruder) > eps) return false;
    return true;
}

/// Capture indicator: 0 once the summed distances are inside the capture
/// band, 1 otherwise. The exact-zero sign condition of the continuous model
/// is absorbed into the eps_capture threshold.
inline double capture_indicator(const AgentState& s, double eps_capture) {
    return distance_sum(s) <= static_cast<double>(s.defenders.size()) * eps_capture ? 0.0 : 1.0;
}

/// Consensus control law for defender i (0-based): constant speed along the
/// combined pull of communicating neighbours and, when sensing, the
/// intruder. Returns zero when the pull direction is numerically undefined
/// (norm below eps_singular), which keeps the captured equilibrium fixed.
inline Vec2 defender_velocity(int i, const AgentState& s, const CaptureMatrixSet& cm, double speed,
                              double eps_singular = 1e-9) {
    const int n = cm.size();
    Vec2 pull{0.0, 0.0};
    const Vec2 xi = s.defenders[i];
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        pull += (-cm.w_full(i, j)) * (s.defenders[j] - xi);
    }
    pull += cm.w_sense(i, i) * (s.intruder - xi);
    const double len = norm(pull);
    if (len <= eps_singular) return {0.0, 0.0};
    return (speed / len) * pull;
}

/// Heading angle chosen by the intruder policy at the given state.
inline double intruder_heading(const AgentState& s, const IntruderPolicy& policy, Vec2 target) {
    if (policy.kind == IntruderPolicy::Kind::scripted) {
        double heading = policy.schedule.front().heading;
        for (const ScheduleEntry& e : policy.schedule) {
            if (e.t_start <= s.time) heading = e.heading;
            else break;
        }
        return heading;
    }
    const Vec2 to_target = target - s.intruder;
    if (to_target.x == 0.0 && to_target.y == 0.0) return 0.0;  // degenerate: already at target
    return std::atan2(to_target.y, to_target.x);
}

/// Intruder velocity including the capture indicator: motion stops once the
/// team has closed to the capture band.
inline Vec2 intruder_velocity(const AgentState& s, double heading, double speed,
                              double eps_capture) {
    return capture_indicator(s, eps_capture) * speed * unit_heading(heading);
}

enum class OutcomeKind { capture, breach, timeout };

inline const char* outcome_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::capture: return "capture";
        case OutcomeKind::breach: return "breach";
        default: return "timeout";
    }
}

struct Outcome {
    OutcomeKind kind = OutcomeKind::timeout;
    double time = 0.0;
};

struct SimulationTrace {
    struct Sample {
        double t = 0.0;
        AgentState state;
        double lyapunov = 0.0;
    };
    std::vector<Sample> samples;
    Outcome outcome;
};

/// Quadratic consensus energy sum_ij W_ij <xi_i, xi_j> with
/// xi_i = x_i - x_intruder. Zero exactly at simultaneous capture.
inline double lyapunov_value(const AgentState& s, const CaptureMatrixSet& cm) {
    const int n = cm.size();
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 xi_i = s.defenders[i] - s.intruder;
        for (int j = 0; j < n; ++j) {
            const Vec2 xi_j = s.defenders[j] - s.intruder;
            v += cm.w_full(i, j) * dot(xi_i, xi_j);
        }
    }
    return v;
}

namespace detail {

/// Velocities of all agents for the current state; scratch-free hot path.
inline void eval_rhs(const AgentState& s, const Scenario& sc, const CaptureMatrixSet& cm,
                     std::vector<Vec2>& defender_vel, Vec2& intruder_vel_out) {
    const int n = cm.size();
    defender_vel.resize(n);
    for (int i = 0; i < n; ++i)
        defender_vel[i] = defender_velocity(i, s, cm, sc.defender_speeds[i], sc.numerics.eps_singular);
    const double heading = intruder_heading(s, sc.policy, sc.target);
    intruder_vel_out = intruder_velocity(s, heading, sc.intruder_speed, sc.numerics.eps_capture);
}

struct StepScratch {
    std::vector<Vec2> v1, v2, v3, v4;
    Vec2 i1, i2, i3, i4;
    AgentState stage;
};

inline void advance(AgentState& s, const Scenario& sc, const CaptureMatrixSet& cm,
                    StepScratch& scratch) {
    const double dt = sc.numerics.dt;
    if (sc.numerics.integrator == IntegratorKind::euler) {
        eval_rhs(s, sc, cm, scratch.v1, scratch.i1);
        for (std::size_t i = 0; i < s.defenders.size(); ++i) s.defenders[i] += dt * scratch.v1[i];
        s.intruder += dt * scratch.i1;
    } else {
        AgentState& stage = scratch.stage;
        eval_rhs(s, sc, cm, scratch.v1, scratch.i1);

        stage = s;
        stage.time = s.time + 0.5 * dt;
        for (std::size_t i = 0; i < s.defenders.size(); ++i)
            stage.defenders[i] = s.defenders[i] + 0.5 * dt * scratch.v1[i];
        stage.intruder = s.intruder + 0.5 * dt * scratch.i1;
        eval_rhs(stage, sc, cm, scratch.v2, scratch.i2);

        for (std::size_t i = 0; i < s.defenders.size(); ++i)
            stage.defenders[i] = s.defenders[i] + 0.5 * dt * scratch.v2[i];
        stage.intruder = s.intruder + 0.5 * dt * scratch.i2;
        eval_rhs(stage, sc, cm, scratch.v3, scratch.i3);

        stage.time = s.time + dt;
        for (std::size_t i = 0; i < s.defenders.size(); ++i)
            stage.defenders[i] = s.defenders[i] + dt * scratch.v3[i];
        stage.intruder = s.intruder + dt * scratch.i3;
        eval_rhs(stage, sc, cm, scratch.v4, scratch.i4);

        const double w = dt / 6.0;
        for (std::size_t i = 0; i < s.defenders.size(); ++i)
            s.defenders[i] += w * (scratch.v1[i] + 2.0 * scratch.v2[i] + 2.0 * scratch.v3[i] +
                                   scratch.v4[i]);
        s.intruder += w * (scratch.i1 + 2.0 * scratch.i2 + 2.0 * scratch.i3 + scratch.i4);
    }
}

}  // namespace detail

/// Advance the state by one fixed step dt. Deterministic: identical inputs
/// give bit-identical outputs.
inline AgentState step(const AgentState& state, const Scenario& scenario,
                       const CaptureMatrixSet& cm) {
    AgentState next = state;
    detail::StepScratch scratch;
    detail::advance(next, scenario, cm, scratch);
    next.time = state.time + scenario.numerics.dt;
    next.captured = capture_indicator(next, scenario.numerics.eps_capture) == 0.0;
    return next;
}

/// Run the scenario to its first terminal event: simultaneous capture
/// (every defender within eps_capture at the same step), breach (intruder
/// within eps_target of the target while not captured), or timeout at
/// t_max. Event times are reported at the midpoint of the step in which the
/// condition first holds; resolution is dt.
inline SimulationTrace simulate(const Scenario& scenario, const CaptureMatrixSet& cm) {
    validate_scenario(scenario);
    if (!scenario.allow_assumption_violations) {
        const AssumptionReport rep = validate_assumptions(scenario.graph);
        if (!rep.pass()) {
            std::string what = "scenario: assumptions violated:";
            if (!rep.symmetric_ok) what += " weights-asymmetric";
            if (!rep.connected) what += " graph-disconnected";
            if (!rep.sensing_ok) what += " no-sensing-defender";
            throw config_error("assumptions_violated", what);
        }
    }

    const Numerics& num = scenario.numerics;
    SimulationTrace trace;
    AgentState state = scenario.initial_state;
    state.time = 0.0;
    state.captured = capture_indicator(state, num.eps_capture) == 0.0;

    auto record = [&](const AgentState& s) {
        trace.samples.push_back({s.time, s, lyapunov_value(s, cm)});
    };
    record(state);

    if (all_within(state, num.eps_capture)) {
        trace.outcome = {OutcomeKind::capture, 0.0};
        return trace;
    }
    if (norm(state.intruder - scenario.target) <= num.eps_target) {
        trace.outcome = {OutcomeKind::breach, 0.0};
        return trace;
    }

    detail::StepScratch scratch;
    long long k = 0;
    while (true) {
        const double t = static_cast<double>(k) * num.dt;
        if (t >= num.t_max) {
            if (trace.samples.back().t < t) record(state);
            trace.outcome = {OutcomeKind::timeout, num.t_max};
            return trace;
        }
        detail::advance(state, scenario, cm, scratch);
        ++k;
        state.time = static_cast<double>(k) * num.dt;
        state.captured = capture_indicator(state, num.eps_capture) == 0.0;

        const bool captured_now = all_within(state, num.eps_capture);
        const bool breached_now =
            !captured_now && norm(state.intruder - scenario.target) <= num.eps_target;
        if (captured_now || breached_now) {
            record(state);
            trace.outcome = {captured_now ? OutcomeKind::capture : OutcomeKind::breach,
                             state.time - 0.5 * num.dt};
            return trace;
        }
        if (num.sample_stride > 0 && k % num.sample_stride == 0) record(state);
    }
}

inline SimulationTrace simulate(const Scenario& scenario) {
    return simulate(scenario, build_capture_matrices(scenario.graph));
}

}  // namespace capsim

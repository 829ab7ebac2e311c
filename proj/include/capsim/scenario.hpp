#pragma once

#include <string>
#include <vector>

#include "capsim/errors.hpp"
#include "capsim/geometry.hpp"
#include "capsim/graph.hpp"

namespace capsim {

/// Positions of every agent at one instant. `captured` mirrors the capture
/// indicator of the intruder dynamics: true once the summed defender
/// distances fall within N * eps_capture.
struct AgentState {
    std::vector<Vec2> defenders;
    Vec2 intruder;
    double time = 0.0;
    bool captured = false;

    friend bool operator==(const AgentState& a, const AgentState& b) {
        return a.defenders == b.defenders && a.intruder == b.intruder && a.time == b.time &&
               a.captured == b.captured;
    }
};

enum class IntegratorKind { euler, rk4 };

struct Numerics {
    double dt = 1e-3;
    double eps_capture = 0.05;   // per-defender capture radius
    double eps_target = 0.05;    // breach radius around the target
    double eps_singular = 1e-9;  // direction-norm guard in the control law
    double t_max = 200.0;
    int sample_stride = 10;      // record every k-th step; 0 = endpoints only
    IntegratorKind integrator = IntegratorKind::euler;

    friend bool operator==(const Numerics&, const Numerics&) = default;
};

struct ScheduleEntry {
    double t_start = 0.0;
    double heading = 0.0;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Intruder steering policy. "direct" heads straight at the target;
/// "scripted" replays a piecewise-constant heading schedule. Policies are
/// evaluated against the full agent state, so richer adversaries can be
/// added here without touching the dynamics.
struct IntruderPolicy {
    enum class Kind { direct, scripted };
    Kind kind = Kind::direct;
    std::vector<ScheduleEntry> schedule;  // scripted only; sorted by t_start, covers t = 0

    friend bool operator==(const IntruderPolicy&, const IntruderPolicy&) = default;
};

struct Scenario {
    CommGraph graph;
    std::vector<double> defender_speeds;
    double intruder_speed = 0.0;
    AgentState initial_state;
    IntruderPolicy policy;
    Vec2 target{0.0, 0.0};
    Numerics numerics;
    bool allow_assumption_violations = false;
};

inline void validate_scenario(const Scenario& s) {
    const int n = s.graph.size();
    if (static_cast<int>(s.defender_speeds.size()) != n)
        throw config_error("bad_dimensions", "scenario: speed count does not match team size");
    if (static_cast<int>(s.initial_state.defenders.size()) != n)
        throw config_error("bad_dimensions", "scenario: position count does not match team size");
    for (int i = 0; i < n; ++i)
        if (!(s.defender_speeds[i] > 0.0))
            throw config_error("non_positive_speed", "scenario: defender " + std::to_string(i + 1) +
                                                         " speed must be strictly positive");
    if (!(s.intruder_speed > 0.0))
        throw config_error("non_positive_speed", "scenario: intruder speed must be strictly positive");
    if (!(s.numerics.dt > 0.0))
        throw config_error("bad_numerics", "scenario: dt must be strictly positive");
    if (!(s.numerics.eps_capture > 0.0) || !(s.numerics.eps_target > 0.0) ||
        !(s.numerics.eps_singular > 0.0))
        throw config_error("bad_numerics", "scenario: tolerances must be strictly positive");
    if (!(s.numerics.t_max > 0.0))
        throw config_error("bad_numerics", "scenario: t_max must be strictly positive");
    if (s.numerics.sample_stride < 0)
        throw config_error("bad_numerics", "scenario: sample_stride must be >= 0");
    if (s.policy.kind == IntruderPolicy::Kind::scripted) {
        if (s.policy.schedule.empty())
            throw config_error("schedule_gap", "scenario: scripted policy needs a heading schedule");
        if (s.policy.schedule.front().t_start > 0.0)
            throw config_error("schedule_gap",
                               "scenario: heading schedule must start at t = 0 (first entry at t = " +
                                   std::to_string(s.policy.schedule.front().t_start) + ")");
        for (std::size_t k = 1; k < s.policy.schedule.size(); ++k)
            if (!(s.policy.schedule[k].t_start > s.policy.schedule[k - 1].t_start))
                throw config_error("schedule_gap",
                                   "scenario: heading schedule times must be strictly increasing");
    }
}

}  // namespace capsim

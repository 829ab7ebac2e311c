#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "capsim/capture_map.hpp"
#include "capsim/certificates.hpp"
#include "capsim/errors.hpp"
#include "capsim/scenario.hpp"

namespace capsim {

using nlohmann::json;

namespace detail {

inline void reject_unknown_keys(const json& j, const std::string& path,
                                const std::set<std::string>& allowed) {
    if (!j.is_object())
        throw config_error("bad_value", "scenario: " + path + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw config_error("unknown_key", "scenario: unknown key '" + key + "' in " + path);
    }
}

inline const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key))
        throw config_error("missing_section", "scenario: missing '" + key + "' in " + path);
    return j.at(key);
}

inline double as_number(const json& j, const std::string& path) {
    if (!j.is_number())
        throw config_error("bad_value", "scenario: expected a number at " + path);
    return j.get<double>();
}

inline int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer())
        throw config_error("bad_value", "scenario: expected an integer at " + path);
    return j.get<int>();
}

inline Vec2 as_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2)
        throw config_error("bad_value", "scenario: expected [x, y] at " + path);
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

}  // namespace detail

/// What a scenario file describes beyond the core scenario: an optional
/// map grid and an optional parameter sweep. `sweep_values` keeps the
/// normalized values for echoing; `build_sweep` expands them into full
/// scenarios.
struct ExperimentSpec {
    std::optional<GridSpec> grid;
    std::optional<SweepParameter> sweep_parameter;
    int sweep_defender = 0;  // 1-based, defender_speed sweeps only
    json sweep_values;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct ScenarioBundle {
    Scenario scenario;
    ExperimentSpec experiment;
};

namespace detail {

inline CommGraph parse_graph(const json& j, int n) {
    reject_unknown_keys(j, "graph", {"edges", "matrix", "sensing"});
    const json& jsens = require(j, "graph", "sensing");
    if (!jsens.is_array() || static_cast<int>(jsens.size()) != n)
        throw config_error("bad_dimensions", "scenario: graph.sensing must list one 0/1 entry per defender");
    std::vector<int> sensing;
    for (std::size_t i = 0; i < jsens.size(); ++i) {
        const int b = as_int(jsens[i], "graph.sensing[" + std::to_string(i) + "]");
        if (b != 0 && b != 1)
            throw config_error("bad_sensing",
                               "scenario: graph.sensing[" + std::to_string(i) + "] must be 0 or 1");
        sensing.push_back(b);
    }

    if (j.contains("edges") == j.contains("matrix"))
        throw config_error("bad_value", "scenario: graph needs exactly one of 'edges' or 'matrix'");

    if (j.contains("matrix")) {
        const json& jm = j.at("matrix");
        if (!jm.is_array() || static_cast<int>(jm.size()) != n)
            throw config_error("bad_dimensions", "scenario: graph.matrix must be " +
                                                     std::to_string(n) + "x" + std::to_string(n));
        Matrix w(n, n);
        for (int i = 0; i < n; ++i) {
            const json& row = jm[i];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw config_error("bad_dimensions", "scenario: graph.matrix row " +
                                                         std::to_string(i + 1) + " has wrong length");
            for (int k = 0; k < n; ++k)
                w(i, k) = as_number(row[k], "graph.matrix[" + std::to_string(i) + "][" +
                                                std::to_string(k) + "]");
        }
        if (!is_symmetric(w, 0.0)) {
            for (int i = 0; i < n; ++i)
                for (int k = i + 1; k < n; ++k)
                    if (w(i, k) != w(k, i))
                        throw config_error("asymmetric_weights",
                                           "scenario: graph.matrix (" + std::to_string(i + 1) + "," +
                                               std::to_string(k + 1) + ") differs from (" +
                                               std::to_string(k + 1) + "," + std::to_string(i + 1) +
                                               ")");
        }
        return make_comm_graph(std::move(w), std::move(sensing));
    }

    const json& je = j.at("edges");
    if (!je.is_array())
        throw config_error("bad_value", "scenario: graph.edges must be an array");
    std::vector<std::tuple<int, int, double>> edges;
    for (std::size_t e = 0; e < je.size(); ++e) {
        const json& entry = je[e];
        const std::string path = "graph.edges[" + std::to_string(e) + "]";
        if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
            throw config_error("bad_value", "scenario: " + path + " must be [i, j] or [i, j, w]");
        const int i = as_int(entry[0], path + "[0]");
        const int k = as_int(entry[1], path + "[1]");
        const double w = entry.size() == 3 ? as_number(entry[2], path + "[2]") : 1.0;
        if (i < 1 || i > n || k < 1 || k > n)
            throw config_error("bad_edge", "scenario: " + path + " endpoints must be in 1.." +
                                               std::to_string(n));
        edges.emplace_back(i - 1, k - 1, w);
    }
    return graph_from_edges(n, edges, std::move(sensing));
}

inline GridSpec parse_grid(const json& j) {
    reject_unknown_keys(j, "experiment.grid",
                        {"x_min", "x_max", "y_min", "y_max", "nx", "ny", "t_max"});
    GridSpec g;
    g.x_min = as_number(require(j, "experiment.grid", "x_min"), "experiment.grid.x_min");
    g.x_max = as_number(require(j, "experiment.grid", "x_max"), "experiment.grid.x_max");
    g.y_min = as_number(require(j, "experiment.grid", "y_min"), "experiment.grid.y_min");
    g.y_max = as_number(require(j, "experiment.grid", "y_max"), "experiment.grid.y_max");
    g.nx = as_int(require(j, "experiment.grid", "nx"), "experiment.grid.nx");
    g.ny = as_int(require(j, "experiment.grid", "ny"), "experiment.grid.ny");
    if (j.contains("t_max")) g.cell_t_max = as_number(j.at("t_max"), "experiment.grid.t_max");
    if (g.nx < 2 || g.ny < 2)
        throw config_error("bad_value", "scenario: experiment.grid needs nx, ny >= 2");
    if (!(g.x_max > g.x_min) || !(g.y_max > g.y_min))
        throw config_error("bad_value", "scenario: experiment.grid extent is empty");
    if (!(g.cell_t_max > 0.0))
        throw config_error("bad_value", "scenario: experiment.grid.t_max must be positive");
    return g;
}

}  // namespace detail

/// Parse and fully validate a scenario document. All defaults are applied
/// here so the echoed configuration is complete; unknown keys anywhere are
/// rejected with the offending path.
inline ScenarioBundle parse_scenario(const json& root) {
    using namespace detail;
    if (!root.is_object())
        throw config_error("bad_value", "scenario: document root must be an object");
    reject_unknown_keys(root, "document root",
                        {"agents", "graph", "intruder", "target", "numerics", "experiment",
                         "allow_assumption_violations"});

    ScenarioBundle bundle;
    Scenario& sc = bundle.scenario;

    const json& agents = require(root, "document root", "agents");
    reject_unknown_keys(agents, "agents", {"positions", "speeds"});
    const json& jpos = require(agents, "agents", "positions");
    const json& jspd = require(agents, "agents", "speeds");
    if (!jpos.is_array() || jpos.empty())
        throw config_error("bad_value", "scenario: agents.positions must be a non-empty array");
    const int n = static_cast<int>(jpos.size());
    for (int i = 0; i < n; ++i)
        sc.initial_state.defenders.push_back(as_point(jpos[i], "agents.positions[" + std::to_string(i) + "]"));
    if (!jspd.is_array() || static_cast<int>(jspd.size()) != n)
        throw config_error("bad_dimensions", "scenario: agents.speeds must list one speed per defender");
    for (int i = 0; i < n; ++i) {
        const double v = as_number(jspd[i], "agents.speeds[" + std::to_string(i) + "]");
        if (!(v > 0.0))
            throw config_error("non_positive_speed", "scenario: agents.speeds[" + std::to_string(i) +
                                                         "] must be strictly positive");
        sc.defender_speeds.push_back(v);
    }

    sc.graph = parse_graph(require(root, "document root", "graph"), n);

    const json& intruder = require(root, "document root", "intruder");
    reject_unknown_keys(intruder, "intruder", {"position", "speed", "policy", "schedule"});
    sc.initial_state.intruder = as_point(require(intruder, "intruder", "position"), "intruder.position");
    sc.intruder_speed = as_number(require(intruder, "intruder", "speed"), "intruder.speed");
    if (!(sc.intruder_speed > 0.0))
        throw config_error("non_positive_speed", "scenario: intruder.speed must be strictly positive");
    std::string policy = "direct";
    if (intruder.contains("policy")) {
        if (!intruder.at("policy").is_string())
            throw config_error("bad_value", "scenario: intruder.policy must be a string");
        policy = intruder.at("policy").get<std::string>();
    }
    if (policy == "direct") {
        sc.policy.kind = IntruderPolicy::Kind::direct;
        if (intruder.contains("schedule"))
            throw config_error("bad_value", "scenario: intruder.schedule is only valid with the scripted policy");
    } else if (policy == "scripted") {
        sc.policy.kind = IntruderPolicy::Kind::scripted;
        const json& js = require(intruder, "intruder", "schedule");
        if (!js.is_array() || js.empty())
            throw config_error("schedule_gap", "scenario: intruder.schedule must be a non-empty array");
        for (std::size_t k = 0; k < js.size(); ++k) {
            const std::string path = "intruder.schedule[" + std::to_string(k) + "]";
            if (!js[k].is_array() || js[k].size() != 2)
                throw config_error("bad_value", "scenario: " + path + " must be [t_start, heading]");
            sc.policy.schedule.push_back(
                {as_number(js[k][0], path + "[0]"), as_number(js[k][1], path + "[1]")});
        }
    } else {
        throw config_error("bad_value", "scenario: intruder.policy must be 'direct' or 'scripted'");
    }

    if (root.contains("target")) sc.target = as_point(root.at("target"), "target");

    bool t_max_given = false;
    if (root.contains("numerics")) {
        const json& num = root.at("numerics");
        reject_unknown_keys(num, "numerics",
                            {"dt", "eps_capture", "eps_target", "eps_singular", "t_max",
                             "integrator", "sample_stride"});
        if (num.contains("dt")) sc.numerics.dt = as_number(num.at("dt"), "numerics.dt");
        if (num.contains("eps_capture"))
            sc.numerics.eps_capture = as_number(num.at("eps_capture"), "numerics.eps_capture");
        if (num.contains("eps_target"))
            sc.numerics.eps_target = as_number(num.at("eps_target"), "numerics.eps_target");
        if (num.contains("eps_singular"))
            sc.numerics.eps_singular = as_number(num.at("eps_singular"), "numerics.eps_singular");
        if (num.contains("t_max")) {
            sc.numerics.t_max = as_number(num.at("t_max"), "numerics.t_max");
            t_max_given = true;
        }
        if (num.contains("sample_stride"))
            sc.numerics.sample_stride = as_int(num.at("sample_stride"), "numerics.sample_stride");
        if (num.contains("integrator")) {
            const json& ji = num.at("integrator");
            if (!ji.is_string() || (ji.get<std::string>() != "euler" && ji.get<std::string>() != "rk4"))
                throw config_error("bad_value", "scenario: numerics.integrator must be 'euler' or 'rk4'");
            sc.numerics.integrator =
                ji.get<std::string>() == "rk4" ? IntegratorKind::rk4 : IntegratorKind::euler;
        }
    }

    if (root.contains("allow_assumption_violations")) {
        if (!root.at("allow_assumption_violations").is_boolean())
            throw config_error("bad_value", "scenario: allow_assumption_violations must be a boolean");
        sc.allow_assumption_violations = root.at("allow_assumption_violations").get<bool>();
    }

    if (root.contains("experiment")) {
        const json& exp = root.at("experiment");
        detail::reject_unknown_keys(exp, "experiment", {"grid", "sweep"});
        if (exp.contains("grid")) bundle.experiment.grid = detail::parse_grid(exp.at("grid"));
        if (exp.contains("sweep")) {
            const json& sw = exp.at("sweep");
            detail::reject_unknown_keys(sw, "experiment.sweep", {"parameter", "defender", "values"});
            const json& jp = detail::require(sw, "experiment.sweep", "parameter");
            if (!jp.is_string())
                throw config_error("bad_value", "scenario: experiment.sweep.parameter must be a string");
            const std::string p = jp.get<std::string>();
            if (p == "defender_speed") {
                bundle.experiment.sweep_parameter = SweepParameter::defender_speed;
                bundle.experiment.sweep_defender =
                    detail::as_int(detail::require(sw, "experiment.sweep", "defender"),
                                   "experiment.sweep.defender");
                if (bundle.experiment.sweep_defender < 1 || bundle.experiment.sweep_defender > n)
                    throw config_error("bad_value", "scenario: experiment.sweep.defender must be in 1.." +
                                                        std::to_string(n));
            } else if (p == "sensing") {
                bundle.experiment.sweep_parameter = SweepParameter::sensing;
            } else if (p == "edges") {
                bundle.experiment.sweep_parameter = SweepParameter::edges;
            } else {
                throw config_error("bad_value",
                                   "scenario: experiment.sweep.parameter must be one of "
                                   "'defender_speed', 'sensing', 'edges'");
            }
            bundle.experiment.sweep_values = detail::require(sw, "experiment.sweep", "values");
            if (!bundle.experiment.sweep_values.is_array() || bundle.experiment.sweep_values.empty())
                throw config_error("bad_value", "scenario: experiment.sweep.values must be a non-empty array");
        }
    }

    // Default t_max: four times the capture-time bound when it is finite,
    // otherwise a fixed horizon.
    if (!t_max_given) {
        const CaptureMatrixSet cm = build_capture_matrices(sc.graph);
        const CaptureCertificate cert = capture_time_bound(sc, cm);
        sc.numerics.t_max = cert.t_star_bound ? 4.0 * *cert.t_star_bound : 200.0;
    }

    validate_scenario(sc);
    return bundle;
}

inline ScenarioBundle load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("missing_file", "scenario: cannot open '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("parse_error", "scenario: " + std::string(e.what()));
    }
    return parse_scenario(root);
}

/// Canonical echo of a parsed bundle with every default materialized.
/// parse_scenario(echo_scenario(b)) reproduces b exactly.
inline json echo_scenario(const ScenarioBundle& bundle) {
    const Scenario& sc = bundle.scenario;
    const int n = sc.graph.size();
    json root;

    json positions = json::array();
    for (const Vec2& p : sc.initial_state.defenders) positions.push_back({p.x, p.y});
    root["agents"] = {{"positions", positions}, {"speeds", sc.defender_speeds}};

    json matrix = json::array();
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int j = 0; j < n; ++j) row.push_back(sc.graph.weights(i, j));
        matrix.push_back(row);
    }
    root["graph"] = {{"matrix", matrix}, {"sensing", sc.graph.sensing}};

    json intruder = {{"position", {sc.initial_state.intruder.x, sc.initial_state.intruder.y}},
                     {"speed", sc.intruder_speed}};
    if (sc.policy.kind == IntruderPolicy::Kind::direct) {
        intruder["policy"] = "direct";
    } else {
        intruder["policy"] = "scripted";
        json schedule = json::array();
        for (const ScheduleEntry& e : sc.policy.schedule) schedule.push_back({e.t_start, e.heading});
        intruder["schedule"] = schedule;
    }
    root["intruder"] = intruder;

    root["target"] = {sc.target.x, sc.target.y};
    root["numerics"] = {
        {"dt", sc.numerics.dt},
        {"eps_capture", sc.numerics.eps_capture},
        {"eps_target", sc.numerics.eps_target},
        {"eps_singular", sc.numerics.eps_singular},
        {"t_max", sc.numerics.t_max},
        {"integrator", sc.numerics.integrator == IntegratorKind::rk4 ? "rk4" : "euler"},
        {"sample_stride", sc.numerics.sample_stride},
    };
    root["allow_assumption_violations"] = sc.allow_assumption_violations;

    if (bundle.experiment.grid || bundle.experiment.sweep_parameter) {
        json exp;
        if (bundle.experiment.grid) {
            const GridSpec& g = *bundle.experiment.grid;
            exp["grid"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
                           {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny},
                           {"t_max", g.cell_t_max}};
        }
        if (bundle.experiment.sweep_parameter) {
            json sw;
            switch (*bundle.experiment.sweep_parameter) {
                case SweepParameter::defender_speed:
                    sw["parameter"] = "defender_speed";
                    sw["defender"] = bundle.experiment.sweep_defender;
                    break;
                case SweepParameter::sensing: sw["parameter"] = "sensing"; break;
                case SweepParameter::edges: sw["parameter"] = "edges"; break;
            }
            sw["values"] = bundle.experiment.sweep_values;
            exp["sweep"] = sw;
        }
        root["experiment"] = exp;
    }
    return root;
}

/// Expand the sweep section into one full scenario per setting.
inline SweepSpec build_sweep(const ScenarioBundle& bundle) {
    if (!bundle.experiment.sweep_parameter)
        throw config_error("missing_section", "scenario: no experiment.sweep section");
    SweepSpec spec;
    spec.parameter = *bundle.experiment.sweep_parameter;
    const json& values = bundle.experiment.sweep_values;
    const int n = bundle.scenario.graph.size();

    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::string path = "experiment.sweep.values[" + std::to_string(k) + "]";
        SweepSetting setting;
        setting.scenario = bundle.scenario;
        switch (spec.parameter) {
            case SweepParameter::defender_speed: {
                const double v = detail::as_number(values[k], path);
                if (!(v > 0.0))
                    throw config_error("non_positive_speed", "scenario: " + path +
                                                                 " must be strictly positive");
                setting.scenario.defender_speeds[bundle.experiment.sweep_defender - 1] = v;
                setting.label = "v" + std::to_string(bundle.experiment.sweep_defender) + "=" +
                                json(v).dump();
                break;
            }
            case SweepParameter::sensing: {
                if (!values[k].is_array() || static_cast<int>(values[k].size()) != n)
                    throw config_error("bad_dimensions", "scenario: " + path +
                                                             " must list one 0/1 entry per defender");
                std::vector<int> sensing;
                std::string label = "b=";
                for (int i = 0; i < n; ++i) {
                    const int b = detail::as_int(values[k][i], path + "[" + std::to_string(i) + "]");
                    if (b != 0 && b != 1)
                        throw config_error("bad_sensing", "scenario: " + path + "[" +
                                                              std::to_string(i) + "] must be 0 or 1");
                    sensing.push_back(b);
                    label += std::to_string(b);
                }
                setting.scenario.graph = make_comm_graph(bundle.scenario.graph.weights, sensing);
                setting.label = label;
                break;
            }
            case SweepParameter::edges: {
                if (!values[k].is_array())
                    throw config_error("bad_value", "scenario: " + path + " must be an edge list");
                std::vector<std::tuple<int, int, double>> edges;
                for (std::size_t e = 0; e < values[k].size(); ++e) {
                    const json& entry = values[k][e];
                    const std::string epath = path + "[" + std::to_string(e) + "]";
                    if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
                        throw config_error("bad_value",
                                           "scenario: " + epath + " must be [i, j] or [i, j, w]");
                    const int i = detail::as_int(entry[0], epath + "[0]");
                    const int j = detail::as_int(entry[1], epath + "[1]");
                    const double w =
                        entry.size() == 3 ? detail::as_number(entry[2], epath + "[2]") : 1.0;
                    edges.emplace_back(i - 1, j - 1, w);
                }
                setting.scenario.graph =
                    graph_from_edges(n, edges, bundle.scenario.graph.sensing);
                setting.label = "edges#" + std::to_string(k) + " (" +
                                std::to_string(values[k].size()) + " edges)";
                break;
            }
        }
        spec.settings.push_back(std::move(setting));
    }
    return spec;
}

}  // namespace capsim

// capsim command-line driver.
//
// Subcommands:
//   simulate     run one scenario, write trace CSV + result JSON + trajectory SVG
//   bound        print the capture certificate as JSON on stdout
//   capture-map  grid of outcomes over intruder start positions (+ heatmap SVG)
//   sweep        per-setting boundaries for a parameter sweep (+ overlay SVG)
//   verify       re-check a stored trace against the consensus-rate inequality
//
// Exit codes: 0 success, 2 configuration error, 3 runtime/IO error,
// 4 verification found a rate violation.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "capsim/capsim.hpp"

namespace fs = std::filesystem;
using namespace capsim;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;
constexpr int exit_violation = 4;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw config_error("io_error", "cannot create output directory '" + dir + "'");
}

int run_simulate(const std::string& scenario_path, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioBundle bundle = load_scenario_file(scenario_path);
    const CaptureMatrixSet cm = build_capture_matrices(bundle.scenario.graph);
    const CaptureCertificate cert = evaluate_certificate(bundle.scenario, cm);
    const SimulationTrace trace = simulate(bundle.scenario, cm);

    ensure_out_dir(out_dir);
    std::ostringstream trace_csv;
    write_trace_csv(trace_csv, trace);
    write_file(out_dir + "/trace.csv", trace_csv.str());
    write_file(out_dir + "/trajectory.svg", trajectory_svg(trace, bundle.scenario));

    const RateReport rate = verify_consensus_rate(trace, cert, bundle.scenario.numerics.dt);
    json outcome = to_json(trace.outcome);
    outcome["rate_check"] = to_json(rate);
    json files = {{"trace", "trace.csv"}, {"trajectory", "trajectory.svg"}};
    const json result = make_run_result("simulate", bundle, cert, outcome, files,
                                        seconds_since(start));
    write_file(out_dir + "/result.json", result.dump(2) + "\n");

    std::cout << "outcome: " << outcome_name(trace.outcome.kind)
              << " at t = " << fmt_num(trace.outcome.time);
    if (cert.t_star_bound) std::cout << " (bound " << fmt_num(*cert.t_star_bound) << ")";
    std::cout << "\nwrote " << out_dir << "/trace.csv, result.json, trajectory.svg\n";
    return exit_ok;
}

int run_bound(const std::string& scenario_path) {
    const ScenarioBundle bundle = load_scenario_file(scenario_path);
    const CaptureMatrixSet cm = build_capture_matrices(bundle.scenario.graph);
    const CaptureCertificate cert = evaluate_certificate(bundle.scenario, cm);
    std::cout << to_json(cert).dump(2) << "\n";
    return exit_ok;
}

int run_capture_map(const std::string& scenario_path, const std::string& out_dir, int jobs) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioBundle bundle = load_scenario_file(scenario_path);
    if (!bundle.experiment.grid)
        throw config_error("missing_section", "scenario: capture-map needs an experiment.grid section");
    const GridSpec grid = *bundle.experiment.grid;
    const CaptureMap map = compute_capture_map(bundle.scenario, grid, jobs);
    const std::vector<Polyline> boundary = extract_boundary(map);

    ensure_out_dir(out_dir);
    std::ostringstream map_csv, boundary_csv;
    write_map_csv(map_csv, map);
    write_boundary_csv(boundary_csv, boundary);
    write_file(out_dir + "/map.csv", map_csv.str());
    write_file(out_dir + "/boundary.csv", boundary_csv.str());
    write_file(out_dir + "/heatmap.svg", heatmap_svg(map, boundary, bundle.scenario));

    int captures = 0, breaches = 0, timeouts = 0, errors = 0;
    for (const CellResult& c : map.cells) {
        if (c.error) ++errors;
        else if (c.kind == OutcomeKind::capture) ++captures;
        else if (c.kind == OutcomeKind::breach) ++breaches;
        else ++timeouts;
    }
    const CaptureMatrixSet cm = build_capture_matrices(bundle.scenario.graph);
    const CaptureCertificate cert = evaluate_certificate(bundle.scenario, cm);
    json outcome = {{"kind", "capture-map"},
                    {"cells", map.cells.size()},
                    {"capture_cells", captures},
                    {"breach_cells", breaches},
                    {"timeout_cells", timeouts},
                    {"error_cells", errors},
                    {"boundary_polylines", boundary.size()}};
    json files = {{"map", "map.csv"}, {"boundary", "boundary.csv"}, {"heatmap", "heatmap.svg"}};
    const json result = make_run_result("capture-map", bundle, cert, outcome, files,
                                        seconds_since(start));
    write_file(out_dir + "/result.json", result.dump(2) + "\n");

    std::cout << "cells: " << map.cells.size() << " (capture " << captures << ", breach "
              << breaches << ", timeout " << timeouts << ", error " << errors << ")\nwrote "
              << out_dir << "/map.csv, boundary.csv, heatmap.svg, result.json\n";
    return exit_ok;
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return out;
}

int run_sweep_cmd(const std::string& scenario_path, const std::string& out_dir, int jobs) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioBundle bundle = load_scenario_file(scenario_path);
    if (!bundle.experiment.grid)
        throw config_error("missing_section", "scenario: sweep needs an experiment.grid section");
    const SweepSpec spec = build_sweep(bundle);
    const GridSpec grid = *bundle.experiment.grid;
    const std::vector<SweepResult> results = run_sweep(spec, grid, jobs);

    ensure_out_dir(out_dir);
    json outcome = {{"kind", "sweep"}, {"settings", json::array()}};
    json files = {{"overlay", "overlay.svg"}};
    for (const SweepResult& r : results) {
        const std::string tag = sanitize_label(r.label);
        json entry = {{"label", r.label}, {"error", r.error}};
        if (!r.error) {
            std::ostringstream map_csv, boundary_csv;
            write_map_csv(map_csv, r.map);
            write_boundary_csv(boundary_csv, r.boundary);
            write_file(out_dir + "/map_" + tag + ".csv", map_csv.str());
            write_file(out_dir + "/boundary_" + tag + ".csv", boundary_csv.str());
            entry["breach_class_cells"] = breach_class_count(r.map);
            entry["map"] = "map_" + tag + ".csv";
            entry["boundary"] = "boundary_" + tag + ".csv";
        } else {
            entry["message"] = r.message;
        }
        outcome["settings"].push_back(entry);
    }
    write_file(out_dir + "/overlay.svg", overlay_svg(results, grid, bundle.scenario));

    const CaptureMatrixSet cm = build_capture_matrices(bundle.scenario.graph);
    const CaptureCertificate cert = evaluate_certificate(bundle.scenario, cm);
    const json result = make_run_result("sweep", bundle, cert, outcome, files,
                                        seconds_since(start));
    write_file(out_dir + "/result.json", result.dump(2) + "\n");

    std::cout << "sweep: " << results.size() << " settings\nwrote " << out_dir
              << "/overlay.svg, per-setting CSVs, result.json\n";
    return exit_ok;
}

int run_verify(const std::string& result_path) {
    std::ifstream in(result_path);
    if (!in) throw config_error("missing_file", "verify: cannot open '" + result_path + "'");
    json result;
    try {
        result = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("parse_error", "verify: " + std::string(e.what()));
    }
    if (!result.contains("config") || !result.contains("files") ||
        !result.at("files").contains("trace"))
        throw config_error("missing_section", "verify: result file lacks config or trace reference");

    const ScenarioBundle bundle = parse_scenario(result.at("config"));
    const CaptureMatrixSet cm = build_capture_matrices(bundle.scenario.graph);
    const CaptureCertificate cert = evaluate_certificate(bundle.scenario, cm);

    const fs::path trace_path =
        fs::path(result_path).parent_path() / result.at("files").at("trace").get<std::string>();
    std::ifstream trace_in(trace_path);
    if (!trace_in) throw config_error("missing_file", "verify: cannot open '" + trace_path.string() + "'");
    const TraceFile tf = read_trace_csv(trace_in);
    if (tf.n_defenders != bundle.scenario.graph.size())
        throw config_error("bad_dimensions", "verify: trace team size does not match config");

    // Rebuild a trace view and cross-check the stored energies.
    SimulationTrace trace;
    double worst_v_mismatch = 0.0;
    for (std::size_t k = 0; k < tf.t.size(); ++k) {
        AgentState s;
        s.defenders = tf.defenders[k];
        s.intruder = tf.intruder[k];
        s.time = tf.t[k];
        const double v = lyapunov_value(s, cm);
        worst_v_mismatch =
            std::max(worst_v_mismatch, std::abs(v - tf.lyapunov[k]) / std::max(1.0, std::abs(v)));
        trace.samples.push_back({tf.t[k], std::move(s), tf.lyapunov[k]});
    }
    if (result.contains("outcome") && result.at("outcome").contains("kind")) {
        const std::string kind = result.at("outcome").at("kind").get<std::string>();
        trace.outcome.time = result.at("outcome").value("time", trace.samples.back().t);
        trace.outcome.kind = kind == "capture"  ? OutcomeKind::capture
                             : kind == "breach" ? OutcomeKind::breach
                                                : OutcomeKind::timeout;
    }

    const RateReport report = verify_consensus_rate(trace, cert, bundle.scenario.numerics.dt);
    json out = to_json(report);
    out["stored_energy_consistent"] = worst_v_mismatch <= 1e-6;
    out["max_energy_mismatch"] = round12(worst_v_mismatch);
    std::cout << out.dump(2) << "\n";

    if (report.applicable && !report.pass) return exit_violation;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"consensus-capture simulation and analysis toolkit"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    std::string scenario_path, out_dir = "out", result_path;
    int jobs = 0;

    auto* sim = app.add_subcommand("simulate", "run a scenario and persist trace + result");
    sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--out-dir", out_dir, "output directory (default: out)");

    auto* bound = app.add_subcommand("bound", "print the capture certificate JSON");
    bound->add_option("scenario", scenario_path, "scenario JSON file")->required();

    auto* cmap = app.add_subcommand("capture-map", "grid of outcomes over intruder starts");
    cmap->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmap->add_option("--out-dir", out_dir, "output directory (default: out)");
    cmap->add_option("--jobs", jobs, "worker threads (default: available cores)");

    auto* sweep = app.add_subcommand("sweep", "boundary overlay across a parameter sweep");
    sweep->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sweep->add_option("--out-dir", out_dir, "output directory (default: out)");
    sweep->add_option("--jobs", jobs, "worker threads (default: available cores)");

    auto* verify = app.add_subcommand("verify", "re-check a stored trace against the rate bound");
    verify->add_option("result", result_path, "result.json produced by simulate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        if (sim->parsed()) return run_simulate(scenario_path, out_dir);
        if (bound->parsed()) return run_bound(scenario_path);
        if (cmap->parsed()) return run_capture_map(scenario_path, out_dir, jobs);
        if (sweep->parsed()) return run_sweep_cmd(scenario_path, out_dir, jobs);
        if (verify->parsed()) return run_verify(result_path);
    } catch (const config_error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_config;
}

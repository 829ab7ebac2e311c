#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "capsim/certificates.hpp"
#include "capsim/dynamics.hpp"
#include "capsim/scenario_io.hpp"
#include "capsim/version.hpp"

namespace capsim {

/// Round a derived result value to 12 significant decimal digits before
/// serialization. Configuration echoes are written exactly; only computed
/// quantities pass through here.
inline double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline json to_json(const ConditionCheck& check) {
    json j;
    j["applicable"] = check.applicable;
    j["ok"] = check.applicable ? json(check.ok) : json(nullptr);
    j["slack"] = check.applicable ? json(round12(check.slack)) : json(nullptr);
    return j;
}

inline json to_json(const CaptureCertificate& cert) {
    json j;
    j["c"] = round12(cert.c);
    j["v0"] = round12(cert.v0);
    j["lambda_min_w"] = round12(cert.lambda_min_w);
    j["m"] = cert.m;
    j["t_star_bound"] = cert.t_star_bound ? json(round12(*cert.t_star_bound)) : json(nullptr);
    j["feasible"] = cert.t_star_bound.has_value();
    j["sufficient_capture"] = to_json(cert.sufficient_capture);
    j["speed_ratio"] = to_json(cert.speed_ratio);
    j["spectral_speed"] = to_json(cert.spectral_speed);
    return j;
}

inline json to_json(const RateReport& report) {
    json j;
    j["applicable"] = report.applicable;
    j["pass"] = report.pass;
    j["max_violation"] = round12(report.max_violation);
    j["tau_num"] = round12(report.tau_num);
    j["samples_checked"] = report.samples_checked;
    j["numerics_alert"] = report.numerics_alert;
    return j;
}

inline json to_json(const Outcome& outcome) {
    return json{{"kind", outcome_name(outcome.kind)}, {"time", round12(outcome.time)}};
}

/// Assemble the persistent record of a run: the fully resolved
/// configuration (re-running it reproduces the outcome bit for bit), the
/// certificate, the outcome, and the artifact paths.
inline json make_run_result(const std::string& command, const ScenarioBundle& bundle,
                            const CaptureCertificate& cert, const json& outcome,
                            const json& files, double wall_clock_seconds) {
    json j;
    j["tool"] = "capsim";
    j["version"] = version_string;
    j["command"] = command;
    j["config"] = echo_scenario(bundle);
    j["certificate"] = to_json(cert);
    j["outcome"] = outcome;
    j["files"] = files;
    j["wall_clock_seconds"] = round12(wall_clock_seconds);
    return j;
}

}  // namespace capsim

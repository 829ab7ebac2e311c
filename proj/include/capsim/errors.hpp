#pragma once

#include <stdexcept>
#include <string>

namespace capsim {

/// Raised for invalid scenario files, graph data, or option combinations.
/// `kind()` is a stable machine-readable tag ("unknown_key", "missing_section",
/// "asymmetric_weights", "non_positive_speed", ...); the message carries the
/// offending path or entry.
class config_error : public std::runtime_error {
public:
    config_error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// Raised when a numeric routine is handed input outside its contract
/// (non-symmetric matrix, failed convergence).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& message) : std::runtime_error(message) {}
};

/// Raised when a spectral bound or certificate is requested for a
/// configuration where it does not exist (no sensing defender, disconnected
/// communication graph).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace capsim

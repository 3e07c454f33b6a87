#pragma once

#include <string>

#include "json.hpp"

namespace ecd::cli {

// Exit codes shared by the command-line entry points.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitSolverNonOptimal = 3;
inline constexpr int kExitInvariantViolation = 4;

// Runs one experiment described by a config object; returns an exit code.
// Known ids: attenuator-sweep, speed-limit, entropy-bound, norm-properties,
// witness-scan.  Results go to out_path as CSV (first line is a '#' timestamp
// comment, excluded from golden comparisons); bound-style experiments also
// write a JSON-lines twin next to it.
int run_experiment(const nlohmann::json& config, const std::string& out_path,
                   unsigned long long seed_override, bool has_seed_override);

// Computes one norm certificate from a config object; writes certificate
// JSON to out_path ("-" for stdout).
int run_norm(const nlohmann::json& config, const std::string& out_path, double gap_tol,
             std::size_t max_iter, std::size_t dim_override);

// Validates a channel spec file, printing residuals.
int run_validate(const std::string& path);

}  // namespace ecd::cli

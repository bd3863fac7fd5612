// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "spectral/diffop.hpp"
#include "spectral/pencil.hpp"

namespace spectral {

/// Configuration failure: schema violations carry the offending key path,
/// parse failures the line/column of the document.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::string what) : std::runtime_error(std::move(what)) {}
};

enum class RunMode { NuScan, Branches, Count, Verify };

std::string to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(const std::string& name);

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t steps = 0;

    std::vector<double> points() const;
};

struct ToleranceSpec {
    double zero_tol = 1e-7;
    double one_tol = 1e-8;
    double cluster_tol = 1e-6;
};

struct AbstractProblem {
    std::vector<HermitianMatrix> coefficients;  // lambda-power coefficients
    std::optional<HermitianMatrix> mass;
    Interval lambda_interval;
};

struct RunConfig {
    RunMode mode = RunMode::Count;
    std::optional<DifferentialProblem> differential;
    std::optional<AbstractProblem> abstract;
    std::optional<Interval> interval;    // counting interval [xi1, xi2)
    std::optional<GridSpec> lambda_grid; // scan grid
    std::size_t branches = 4;
    ToleranceSpec tolerances;
    double grid_step = 0.0;  // locate scan step; 0 = automatic
    std::string output_dir = ".";
    std::string output_prefix;  // empty: derived from the mode

    Interval lambda_interval() const;
};

/// Mode-dependent cross-field checks (counting interval compactly inside the
/// parameter interval, grid present and strictly inside, ...). Called by the
/// loader and again after command-line overrides.
void validate_mode_requirements(const RunConfig& config);

/// Loads and fully validates a config file; every failure names the
/// offending key.
RunConfig load_config(const std::string& path);

/// Same, from an in-memory document (used by tests).
RunConfig parse_config(const std::string& text, const std::string& origin = "<memory>");

}  // namespace spectral

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "spectral/config.hpp"

namespace spectral {

struct RunArtifacts {
    int exit_status = 0;
    std::vector<std::string> files_written;
    std::string report_text;  // count / verify report, also written to disk
};

/// Executes one batch run: builds the model, runs the requested mode, writes
/// the CSV / report artifacts into the output directory. Exit status 0 on
/// success, 2 when a counting verdict fails (a contradiction), throws on
/// configuration or evaluation errors (the CLI maps those to status 1).
RunArtifacts run(const RunConfig& config);

/// Builds the pencil model a config describes (shared by run and tests).
PencilModel build_model(const RunConfig& config);

}  // namespace spectral

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spectral/run.hpp"

namespace {

struct ModeArgs {
    std::string config_path;
    std::string out_dir;
    std::size_t mesh = 0;
    std::size_t grid_steps = 0;
};

void add_mode(CLI::App& app, const std::string& name, const std::string& description,
              ModeArgs& args, spectral::RunMode mode,
              std::optional<spectral::RunMode>& chosen) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", args.config_path, "problem definition file (JSON)")->required();
    sub->add_option("--out", args.out_dir, "output directory (overrides output.dir)");
    sub->add_option("--mesh", args.mesh, "mesh element count (overrides problem.mesh)");
    sub->add_option("--grid-steps", args.grid_steps,
                    "lambda grid step count (overrides lambda_grid.steps)");
    sub->callback([&chosen, mode] { chosen = mode; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenvalue counting for self-adjoint operator families"};
    app.require_subcommand(1);

    ModeArgs args;
    std::optional<spectral::RunMode> mode;
    add_mode(app, "nu-scan", "tabulate inertia counts over a lambda grid", args,
             spectral::RunMode::NuScan, mode);
    add_mode(app, "branches", "tabulate sorted eigenvalue branches", args,
             spectral::RunMode::Branches, mode);
    add_mode(app, "count", "locate and count eigenvalues on an interval", args,
             spectral::RunMode::Count, mode);
    add_mode(app, "verify", "run every applicable counting validator", args,
             spectral::RunMode::Verify, mode);

    CLI11_PARSE(app, argc, argv);
    if (!mode) {
        std::fprintf(stderr, "error: no mode selected\n");
        return 1;
    }

    try {
        spectral::RunConfig cfg = spectral::load_config(args.config_path);
        cfg.mode = *mode;
        if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
        if (args.mesh != 0) {
            if (!cfg.differential) {
                std::fprintf(stderr, "error: --mesh applies only to differential problems\n");
                return 1;
            }
            cfg.differential->mesh = args.mesh;
        }
        if (args.grid_steps != 0) {
            if (!cfg.lambda_grid) {
                std::fprintf(stderr, "error: --grid-steps requires a lambda_grid section\n");
                return 1;
            }
            cfg.lambda_grid->steps = args.grid_steps;
        }

        const spectral::RunArtifacts result = spectral::run(cfg);
        for (const auto& f : result.files_written) std::printf("wrote %s\n", f.c_str());
        if (!result.report_text.empty()) std::fputs(result.report_text.c_str(), stdout);
        return result.exit_status;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "spectral/csv.hpp"
#include "spectral/parallel.hpp"

namespace spectral {

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(body.data(), std::streamsize(body.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

LocateOptions locate_options(const RunConfig& cfg) {
    LocateOptions opt;
    opt.grid_step = cfg.grid_step;
    opt.zero_tol = cfg.tolerances.zero_tol;
    opt.cluster_tol = cfg.tolerances.cluster_tol;
    return opt;
}

std::string interval_text(const Interval& iv) {
    return "[" + format_double(iv.lo) + ", " + format_double(iv.hi) + ")";
}

std::string inertia_text(const Inertia& in) {
    return "negative=" + std::to_string(in.negative) + " zero=" + std::to_string(in.zero) +
           " positive=" + std::to_string(in.positive);
}

void append_verdict(std::string& out, const std::string& name, const TheoremVerdict& v) {
    out += "verdict " + name + ": " + to_string(v.status);
    if (!v.detail.empty()) out += " (" + v.detail + ")";
    out += "\n";
}

std::string located_lines(const CountReport& report) {
    std::string out;
    for (const auto& loc : report.located) {
        out += "  lambda0=" + format_double(loc.lambda0) +
               " multiplicity=" + std::to_string(loc.multiplicity) + " branches=[";
        for (std::size_t i = 0; i < loc.branch_indices.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(loc.branch_indices[i]);
        }
        out += "]";
        if (loc.width_flagged)
            out += " width-flagged(" + format_double(loc.refined_width) + ")";
        if (loc.endpoint_ambiguous) out += " endpoint-ambiguous";
        out += "\n";
    }
    if (report.located.empty()) out += "  (none)\n";
    return out;
}

// sampled hypothesis diagnostics for differential problems
std::string differential_diagnostics(const RunConfig& cfg, const PencilModel& model) {
    std::string out;
    out += "hypothesis diagnostics (differential problem):\n";
    const auto& flags = model.flags();
    out += "  rank(U(lambda)-1) constant on a 32-point grid: ";
    out += flags.rank_constant ? "yes\n" : "NO\n";
    out += "  ker(U(lambda)-1) constant: ";
    out += flags.kernel_constant ? "yes\n" : "NO\n";

    const DifferentialProblem& pr = *cfg.differential;
    const Interval xi = *cfg.interval;
    // p_k monotone non-increasing in lambda (strictly decreasing for k = n),
    // sampled on a coarse grid
    bool mono_ok = true, strict_ok = true;
    std::string witness;
    for (int i = 0; i < 8 && mono_ok; ++i) {
        const double l1 = xi.lo + (xi.hi - xi.lo) * double(i) / 8.0;
        const double l2 = xi.lo + (xi.hi - xi.lo) * double(i + 1) / 8.0;
        for (int jx = 0; jx <= 16; ++jx) {
            const double x = pr.a + (pr.b - pr.a) * double(jx) / 16.0;
            for (std::size_t k = 0; k <= pr.n; ++k) {
                const double v1 = pr.coefficients[k].evaluate(x, l1);
                const double v2 = pr.coefficients[k].evaluate(x, l2);
                if (v2 > v1 + 1e-12 * (1.0 + std::abs(v1))) {
                    mono_ok = false;
                    witness = "p_" + std::to_string(k) + " increases at x=" + format_double(x) +
                              " between lambda=" + format_double(l1) + " and " +
                              format_double(l2);
                }
                if (k == pr.n && !(v2 < v1)) strict_ok = false;
            }
        }
    }
    out += "  coefficients non-increasing in lambda (sampled): ";
    out += mono_ok ? "yes" : ("NO - " + witness);
    out += "\n  p_n strictly decreasing in lambda (sampled): ";
    out += strict_ok ? "yes\n" : "NO\n";

    // boundary matrix monotonicity A(l1) - A(l2) >= 0 on sample pairs
    bool a_mono = true;
    std::string a_witness;
    if (pr.boundary->is_lambda_independent()) {
        out += "  boundary matrix monotone non-increasing: yes (constant boundary)\n";
    } else {
        for (int i = 0; i < 8 && a_mono; ++i) {
            const double l1 = xi.lo + (xi.hi - xi.lo) * double(i) / 8.0;
            const double l2 = xi.lo + (xi.hi - xi.lo) * double(i + 1) / 8.0;
            try {
                const BoundaryMatrix a1 = boundary_matrix(pr.boundary->evaluate(l1), pr.one_tol);
                const BoundaryMatrix a2 = boundary_matrix(pr.boundary->evaluate(l2), pr.one_tol);
                const HermitianMatrix d = a1.a - a2.a;
                const auto ev = hermitian_eigenvalues(d);
                if (ev.front() < -1e-9 * (1.0 + d.frobenius_norm())) {
                    a_mono = false;
                    a_witness = "min eigenvalue " + format_double(ev.front()) +
                                " for the pair (" + format_double(l1) + ", " +
                                format_double(l2) + ")";
                }
            } catch (const std::exception& e) {
                a_mono = false;
                a_witness = e.what();
            }
        }
        out += "  boundary matrix monotone non-increasing (sampled): ";
        out += a_mono ? "yes" : ("NO - " + a_witness);
        out += "\n";
    }
    for (const auto& w : model.flags().warnings) out += "  warning: " + w + "\n";
    return out;
}

}  // namespace

PencilModel build_model(const RunConfig& cfg) {
    if (cfg.differential) return compile(*cfg.differential);
    if (cfg.abstract)
        return PencilModel::polynomial_family(cfg.abstract->coefficients, cfg.abstract->mass,
                                              cfg.abstract->lambda_interval);
    throw ConfigError("config: no problem defined");
}

RunArtifacts run(const RunConfig& cfg) {
    validate_mode_requirements(cfg);
    RunArtifacts artifacts;
    const PencilModel model = build_model(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const std::string prefix =
        cfg.output_prefix.empty() ? to_string(cfg.mode) : cfg.output_prefix;

    switch (cfg.mode) {
        case RunMode::NuScan: {
            const std::vector<double> grid = cfg.lambda_grid->points();
            std::vector<Inertia> inertias(grid.size());
            parallel_for(grid.size(), [&](std::size_t j) {
                inertias[j] = nu(model, grid[j], cfg.tolerances.zero_tol);
            });
            CsvTable table({"lambda", "nu_neg", "nu_zero", "nu_pos"});
            for (std::size_t j = 0; j < grid.size(); ++j)
                table.add_row({format_double(grid[j]), std::to_string(inertias[j].negative),
                               std::to_string(inertias[j].zero),
                               std::to_string(inertias[j].positive)});
            const std::string path = join_path(cfg.output_dir, prefix + ".csv");
            table.write_file(path);
            artifacts.files_written.push_back(path);
            break;
        }
        case RunMode::Branches: {
            const std::size_t m_max = std::min(cfg.branches, model.dimension());
            const BranchTable t = branch_table(model, cfg.lambda_grid->points(), m_max);
            std::vector<std::string> header{"lambda"};
            for (std::size_t m = 1; m <= m_max; ++m)
                header.push_back("Lambda_" + std::to_string(m));
            CsvTable table(header);
            for (std::size_t j = 0; j < t.lambda_grid.size(); ++j) {
                std::vector<std::string> row{format_double(t.lambda_grid[j])};
                for (std::size_t m = 0; m < m_max; ++m)
                    row.push_back(format_double(t.branches[m][j]));
                table.add_row(std::move(row));
            }
            const std::string csv_path = join_path(cfg.output_dir, prefix + ".csv");
            table.write_file(csv_path);
            artifacts.files_written.push_back(csv_path);

            std::string plot;
            plot += "set datafile separator ','\n";
            plot += "set key autotitle columnhead\n";
            plot += "set xlabel 'lambda'\n";
            plot += "set ylabel 'branch value'\n";
            plot += "set grid\n";
            plot += "plot for [i=2:" + std::to_string(m_max + 1) + "] '" + prefix +
                    ".csv' using 1:i with lines\n";
            const std::string plot_path = join_path(cfg.output_dir, prefix + ".gnuplot");
            write_text(plot_path, plot);
            artifacts.files_written.push_back(plot_path);
            break;
        }
        case RunMode::Count:
        case RunMode::Verify: {
            ReportOptions opt;
            opt.locate = locate_options(cfg);
            const CountReport report = count_report(model, *cfg.interval, opt);

            CsvTable table({"lambda0", "multiplicity"});
            for (const auto& loc : report.located)
                table.add_row({format_double(loc.lambda0), std::to_string(loc.multiplicity)});
            const std::string csv_path = join_path(cfg.output_dir, prefix + "_eigenvalues.csv");
            table.write_file(csv_path);
            artifacts.files_written.push_back(csv_path);

            std::string text;
            text += "spectral-count " + to_string(cfg.mode) + " report\n";
            text += "interval: " + interval_text(report.interval) + "\n";
            text += "dimension: " + std::to_string(model.dimension()) + "\n";
            text += "N (eigenvalues, counted with multiplicity): " +
                    std::to_string(report.eigenvalue_count) + "\n";
            text += "located eigenvalues:\n" + located_lines(report);
            text += "nu at " + format_double(report.interval.lo) + ": " +
                    inertia_text(report.nu_lo) + "\n";
            text += "nu at " + format_double(report.interval.hi) + ": " +
                    inertia_text(report.nu_hi) + "\n";
            text += "delta nu: " + std::to_string(report.delta_nu()) + "\n";
            append_verdict(text, "count-lower-bound", report.lower_bound);
            if (cfg.mode == RunMode::Verify) {
                append_verdict(text, "monotone-equality", report.monotone_equality);
                append_verdict(text, "negative-type-equality", report.negative_type_equality);
            }
            for (const auto& c : report.caveats) text += "caveat: " + c + "\n";
            if (cfg.mode == RunMode::Verify && cfg.differential)
                text += differential_diagnostics(cfg, model);

            const std::string report_path = join_path(cfg.output_dir, prefix + "_report.txt");
            write_text(report_path, text);
            artifacts.files_written.push_back(report_path);
            artifacts.report_text = text;

            bool contradiction = report.lower_bound.status == VerdictStatus::Fail;
            if (cfg.mode == RunMode::Verify) {
                contradiction = contradiction ||
                                report.monotone_equality.status == VerdictStatus::Fail ||
                                report.negative_type_equality.status == VerdictStatus::Fail;
            }
            if (contradiction) artifacts.exit_status = 2;
            break;
        }
    }
    return artifacts;
}

}  // namespace spectral

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spectral {

using nlohmann::json;

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::NuScan: return "nu-scan";
        case RunMode::Branches: return "branches";
        case RunMode::Count: return "count";
        case RunMode::Verify: return "verify";
    }
    return "unknown";
}

std::optional<RunMode> parse_run_mode(const std::string& name) {
    if (name == "nu-scan") return RunMode::NuScan;
    if (name == "branches") return RunMode::Branches;
    if (name == "count") return RunMode::Count;
    if (name == "verify") return RunMode::Verify;
    return std::nullopt;
}

std::vector<double> GridSpec::points() const {
    std::vector<double> p(steps);
    for (std::size_t i = 0; i < steps; ++i)
        p[i] = start + (stop - start) * double(i) / double(steps - 1);
    return p;
}

Interval RunConfig::lambda_interval() const {
    if (differential) return differential->lambda_interval;
    if (abstract) return abstract->lambda_interval;
    throw ConfigError("config: no problem defined");
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
    throw ConfigError(key + ": " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + key, "missing required key");
    return *it;
}

double to_number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        double v = 0.0;
        const char* b = s.data();
        const char* e = s.data() + s.size();
        auto res = std::from_chars(b, e, v);
        if (res.ec != std::errc() || res.ptr != e)
            fail(path, "string value '" + s + "' is not a number");
        return v;
    }
    fail(path, "expected a number (or a numeric string)");
}

std::size_t to_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        fail(path, "expected a non-negative integer");
    return std::size_t(j.get<long long>());
}

Complex to_complex(const json& j, const std::string& path) {
    if (j.is_number() || j.is_string()) return Complex(to_number(j, path));
    if (j.is_array() && j.size() == 2)
        return Complex(to_number(j[0], path + "[0]"), to_number(j[1], path + "[1]"));
    fail(path, "expected a real number or an [re, im] pair");
}

Matrix to_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n)
            fail(rp, "expected a row of length " + std::to_string(n));
        for (std::size_t c = 0; c < n; ++c)
            m(i, c) = to_complex(row[c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

HermitianMatrix to_hermitian(const json& j, const std::string& path) {
    try {
        return HermitianMatrix(to_matrix(j, path));
    } catch (const NotHermitianError& e) {
        fail(path, e.what());
    }
}

Interval to_interval(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected [lo, hi]");
    Interval iv{to_number(j[0], path + "[0]"), to_number(j[1], path + "[1]")};
    if (!(iv.lo < iv.hi)) fail(path, "interval endpoints must satisfy lo < hi");
    return iv;
}

UnitaryBoundary to_boundary(const json& j, std::size_t n, const std::string& path) {
    const std::string type = require(j, "type", path + ".").get<std::string>();
    try {
        if (type == "identity") return UnitaryBoundary::constant(Matrix::identity(2 * n));
        if (type == "minus_identity") {
            Matrix u = Matrix::identity(2 * n);
            u *= Complex(-1.0);
            return UnitaryBoundary::constant(u);
        }
        if (type == "constant")
            return UnitaryBoundary::constant(
                to_matrix(require(j, "matrix", path + "."), path + ".matrix"));
        if (type == "generated")
            return UnitaryBoundary::generated(
                to_hermitian(require(j, "theta0", path + "."), path + ".theta0"),
                to_hermitian(require(j, "theta1", path + "."), path + ".theta1"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    fail(path + ".type",
         "unknown boundary type '" + type +
             "' (expected identity, minus_identity, constant or generated)");
}

Expression to_expression(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected an expression string");
    const std::string src = j.get<std::string>();
    try {
        return parse_expression(src);
    } catch (const ParseError& e) {
        fail(path, std::string(e.what()) + " (offset " + std::to_string(e.offset) + ")");
    }
}

RunConfig parse_document(const json& doc) {
    RunConfig cfg;
    if (!doc.is_object()) throw ConfigError("config: document root must be an object");

    if (auto it = doc.find("mode"); it != doc.end()) {
        const auto mode = parse_run_mode(it->get<std::string>());
        if (!mode)
            fail("mode", "unknown mode '" + it->get<std::string>() +
                             "' (expected nu-scan, branches, count or verify)");
        cfg.mode = *mode;
    }

    const json& prob = require(doc, "problem", "");
    const std::string type = require(prob, "type", "problem.").get<std::string>();
    if (type == "differential") {
        DifferentialProblem pr;
        pr.n = to_count(require(prob, "order", "problem."), "problem.order");
        pr.lambda_interval =
            to_interval(require(prob, "lambda_interval", "problem."), "problem.lambda_interval");
        const Interval xiv =
            to_interval(require(prob, "interval", "problem."), "problem.interval");
        pr.a = xiv.lo;
        pr.b = xiv.hi;
        const json& coeffs = require(prob, "coefficients", "problem.");
        if (!coeffs.is_array() || coeffs.size() != pr.n + 1)
            fail("problem.coefficients",
                 "expected n+1 = " + std::to_string(pr.n + 1) + " expressions");
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            pr.coefficients.push_back(
                to_expression(coeffs[k], "problem.coefficients[" + std::to_string(k) + "]"));
        if (auto it = prob.find("coefficient_derivatives"); it != prob.end()) {
            if (!it->is_array() || it->size() != pr.n + 1)
                fail("problem.coefficient_derivatives",
                     "expected n+1 = " + std::to_string(pr.n + 1) + " expressions");
            for (std::size_t k = 0; k < it->size(); ++k)
                pr.coefficient_derivatives.push_back(to_expression(
                    (*it)[k], "problem.coefficient_derivatives[" + std::to_string(k) + "]"));
        }
        pr.boundary =
            to_boundary(require(prob, "boundary", "problem."), pr.n, "problem.boundary");
        if (auto it = prob.find("mesh"); it != prob.end())
            pr.mesh = to_count(*it, "problem.mesh");
        cfg.differential = std::move(pr);
    } else if (type == "abstract") {
        AbstractProblem ap;
        ap.lambda_interval =
            to_interval(require(prob, "lambda_interval", "problem."), "problem.lambda_interval");
        const json& coeffs = require(prob, "coefficients", "problem.");
        if (!coeffs.is_array() || coeffs.empty())
            fail("problem.coefficients", "expected a non-empty array of Hermitian matrices");
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            ap.coefficients.push_back(
                to_hermitian(coeffs[k], "problem.coefficients[" + std::to_string(k) + "]"));
        if (auto it = prob.find("mass"); it != prob.end())
            ap.mass = to_hermitian(*it, "problem.mass");
        cfg.abstract = std::move(ap);
    } else {
        fail("problem.type", "unknown problem type '" + type +
                                 "' (expected differential or abstract)");
    }

    if (auto it = doc.find("interval"); it != doc.end())
        cfg.interval = to_interval(*it, "interval");
    if (auto it = doc.find("lambda_grid"); it != doc.end()) {
        GridSpec g;
        g.start = to_number(require(*it, "start", "lambda_grid."), "lambda_grid.start");
        g.stop = to_number(require(*it, "stop", "lambda_grid."), "lambda_grid.stop");
        g.steps = to_count(require(*it, "steps", "lambda_grid."), "lambda_grid.steps");
        if (g.steps < 2) fail("lambda_grid.steps", "need at least 2 steps");
        if (!(g.start < g.stop)) fail("lambda_grid", "start must be below stop");
        cfg.lambda_grid = g;
    }
    if (auto it = doc.find("branches"); it != doc.end())
        cfg.branches = to_count(*it, "branches");
    if (auto it = doc.find("grid_step"); it != doc.end()) {
        cfg.grid_step = to_number(*it, "grid_step");
        if (cfg.grid_step < 0.0) fail("grid_step", "must be non-negative");
    }
    if (auto it = doc.find("tolerances"); it != doc.end()) {
        const json& t = *it;
        if (auto z = t.find("zero_tol"); z != t.end())
            cfg.tolerances.zero_tol = to_number(*z, "tolerances.zero_tol");
        if (auto z = t.find("one_tol"); z != t.end())
            cfg.tolerances.one_tol = to_number(*z, "tolerances.one_tol");
        if (auto z = t.find("cluster_tol"); z != t.end())
            cfg.tolerances.cluster_tol = to_number(*z, "tolerances.cluster_tol");
        if (cfg.tolerances.zero_tol <= 0 || cfg.tolerances.one_tol <= 0 ||
            cfg.tolerances.cluster_tol <= 0)
            fail("tolerances", "tolerances must be positive");
    }
    if (auto it = doc.find("output"); it != doc.end()) {
        if (auto d = it->find("dir"); d != it->end()) cfg.output_dir = d->get<std::string>();
        if (auto p = it->find("prefix"); p != it->end())
            cfg.output_prefix = p->get<std::string>();
    }
    if (cfg.differential && cfg.differential->one_tol != cfg.tolerances.one_tol)
        cfg.differential->one_tol = cfg.tolerances.one_tol;

    validate_mode_requirements(cfg);
    return cfg;
}

}  // namespace

void validate_mode_requirements(const RunConfig& cfg) {
    const Interval li = cfg.lambda_interval();
    if (cfg.mode == RunMode::Count || cfg.mode == RunMode::Verify) {
        if (!cfg.interval) fail("interval", "required for count and verify modes");
        if (!li.compactly_contains(*cfg.interval))
            fail("interval", "interval not compactly inside lambda_interval");
    }
    if (cfg.mode == RunMode::NuScan || cfg.mode == RunMode::Branches) {
        if (!cfg.lambda_grid) fail("lambda_grid", "required for nu-scan and branches modes");
        if (cfg.lambda_grid->steps < 2) fail("lambda_grid.steps", "need at least 2 steps");
        if (!(li.lo < cfg.lambda_grid->start && cfg.lambda_grid->stop < li.hi))
            fail("lambda_grid", "grid not strictly inside lambda_interval");
    }
    if (cfg.differential) {
        try {
            validate(*cfg.differential);
        } catch (const std::exception& e) {
            fail("problem", e.what());
        }
    }
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // translate the byte offset into line/column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": " + e.what());
    }
    return parse_document(doc);
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace spectral

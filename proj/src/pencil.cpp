// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "spectral/parallel.hpp"

namespace spectral {

namespace {

double zero_band(const std::vector<double>& values, double zero_tol) {
    double radius = 0.0;
    for (double v : values) radius = std::max(radius, std::abs(v));
    return zero_tol * std::max(1.0, radius);
}

}  // namespace

PencilModel::PencilModel(Interval lambda_interval, std::size_t dimension, FormFn form,
                         FormDerivativeFn derivative, Provenance provenance, Flags flags)
    : lambda_interval_(lambda_interval),
      dimension_(dimension),
      form_(std::move(form)),
      derivative_(std::move(derivative)),
      provenance_(provenance),
      flags_(std::move(flags)) {
    if (!(lambda_interval_.lo < lambda_interval_.hi))
        throw std::invalid_argument("pencil: empty parameter interval");
    if (dimension_ == 0) throw std::invalid_argument("pencil: dimension must be positive");
    if (!form_) throw std::invalid_argument("pencil: missing form evaluator");
}

PencilModel::PencilModel(Interval lambda_interval, std::size_t dimension, FormFn form,
                         FormDerivativeFn derivative, Provenance provenance)
    : PencilModel(lambda_interval, dimension, std::move(form), std::move(derivative), provenance,
                  Flags()) {}

PencilModel PencilModel::polynomial_family(std::vector<HermitianMatrix> coeffs,
                                           std::optional<HermitianMatrix> mass,
                                           Interval lambda_interval) {
    if (coeffs.empty()) throw std::invalid_argument("pencil: empty coefficient list");
    const std::size_t dim = coeffs[0].dim();
    for (const auto& c : coeffs)
        if (c.dim() != dim)
            throw std::invalid_argument("pencil: coefficient dimensions differ");
    HermitianMatrix m = mass ? *mass : HermitianMatrix::identity(dim);
    if (m.dim() != dim) throw std::invalid_argument("pencil: mass dimension mismatch");
    cholesky(m);  // reject an indefinite mass up front

    auto shared_coeffs = std::make_shared<std::vector<HermitianMatrix>>(std::move(coeffs));
    auto shared_mass = std::make_shared<HermitianMatrix>(std::move(m));

    FormFn form = [shared_coeffs, shared_mass](double lambda) -> Evaluation {
        const auto& cs = *shared_coeffs;
        Matrix acc = cs.back().matrix();
        for (std::size_t j = cs.size() - 1; j-- > 0;) {
            acc *= Complex(lambda);
            acc += cs[j].matrix();
        }
        return Evaluation{hermitize(acc), *shared_mass};
    };
    FormDerivativeFn deriv = [shared_coeffs](double lambda) -> HermitianMatrix {
        const auto& cs = *shared_coeffs;
        const std::size_t d = cs.size() - 1;
        if (d == 0) return HermitianMatrix::zero(cs[0].dim());
        Matrix acc = cs[d].matrix();
        acc *= Complex(double(d));
        for (std::size_t j = d; j-- > 1;) {
            acc *= Complex(lambda);
            Matrix term = cs[j].matrix();
            term *= Complex(double(j));
            acc += term;
        }
        return hermitize(acc);
    };
    return PencilModel(lambda_interval, dim, std::move(form), std::move(deriv),
                       Provenance::Abstract);
}

PencilModel::Evaluation PencilModel::eval_form(double lambda) const {
    if (!lambda_interval_.contains(lambda))
        throw std::invalid_argument("pencil: lambda " + std::to_string(lambda) +
                                    " outside the parameter interval");
    Evaluation e = form_(lambda);
    if (e.f.dim() != dimension_ || e.m.dim() != dimension_)
        throw std::runtime_error("pencil: evaluation dimension changed");
    return e;
}

HermitianMatrix PencilModel::eval_form_derivative(double lambda) const {
    if (!derivative_) throw std::runtime_error("pencil: no derivative evaluator");
    if (!lambda_interval_.contains(lambda))
        throw std::invalid_argument("pencil: lambda outside the parameter interval");
    HermitianMatrix d = derivative_(lambda);
    if (d.dim() != dimension_)
        throw std::runtime_error("pencil: derivative dimension changed");
    return d;
}

std::vector<double> PencilModel::branch_values(double lambda) const {
    Evaluation e = eval_form(lambda);
    return generalized_eigenvalues(e.f, e.m);
}

Inertia nu(const PencilModel& model, double lambda, double zero_tol) {
    return inertia_of_values(model.branch_values(lambda), zero_tol);
}

BranchTable branch_table(const PencilModel& model, const std::vector<double>& lambda_grid,
                         std::size_t m_max) {
    if (lambda_grid.size() < 2) throw std::invalid_argument("branch_table: need at least 2 points");
    for (std::size_t j = 1; j < lambda_grid.size(); ++j)
        if (!(lambda_grid[j] > lambda_grid[j - 1]))
            throw std::invalid_argument("branch_table: grid must be strictly ascending");
    if (m_max == 0 || m_max > model.dimension())
        throw std::invalid_argument("branch_table: branch count must be in [1, dimension]");

    BranchTable t;
    t.lambda_grid = lambda_grid;
    t.branches.assign(m_max, std::vector<double>(lambda_grid.size(), 0.0));
    std::vector<std::vector<double>> columns(lambda_grid.size());
    parallel_for(lambda_grid.size(),
                 [&](std::size_t j) { columns[j] = model.branch_values(lambda_grid[j]); });
    for (std::size_t j = 0; j < lambda_grid.size(); ++j)
        for (std::size_t m = 0; m < m_max; ++m) t.branches[m][j] = columns[j][m];
    t.continuity_modulus.assign(m_max, 0.0);
    for (std::size_t m = 0; m < m_max; ++m)
        for (std::size_t j = 1; j < lambda_grid.size(); ++j)
            t.continuity_modulus[m] = std::max(t.continuity_modulus[m],
                                               std::abs(t.branches[m][j] - t.branches[m][j - 1]));
    return t;
}

namespace {

struct BranchRoot {
    double lambda = 0.0;
    std::size_t branch = 0;  // 0-based
    double width = 0.0;
    bool flagged = false;
};

double refine_width_target(double lambda) { return 1e-10 * (1.0 + std::abs(lambda)); }

// Bisection on one sorted-eigenvalue branch across a sign change.
BranchRoot bisect_branch(const PencilModel& model, std::size_t m, double lo, double hi,
                         double flo, double fhi, int max_iter) {
    BranchRoot root;
    root.branch = m;
    if (flo == 0.0) {
        root.lambda = lo;
        return root;
    }
    if (fhi == 0.0) {
        root.lambda = hi;
        return root;
    }
    int iter = 0;
    while (hi - lo > refine_width_target(0.5 * (lo + hi)) && iter < max_iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = model.branch_values(mid)[m];
        if (fmid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        ++iter;
    }
    root.lambda = 0.5 * (lo + hi);
    root.width = hi - lo;
    root.flagged = (hi - lo) > refine_width_target(root.lambda) && iter >= max_iter;
    return root;
}

// Golden-section minimization of |branch m| for tangency candidates.
BranchRoot refine_tangency(const PencilModel& model, std::size_t m, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = std::abs(model.branch_values(x1)[m]);
    double f2 = std::abs(model.branch_values(x2)[m]);
    for (int it = 0; it < 80 && (b - a) > refine_width_target(0.5 * (a + b)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = std::abs(model.branch_values(x1)[m]);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = std::abs(model.branch_values(x2)[m]);
        }
    }
    BranchRoot root;
    root.branch = m;
    root.lambda = 0.5 * (a + b);
    root.width = b - a;
    return root;
}

}  // namespace

std::vector<LocatedEigenvalue> locate_eigenvalues(const PencilModel& model, Interval half_open,
                                                  const LocateOptions& options) {
    if (!model.lambda_interval().compactly_contains(half_open))
        throw std::invalid_argument(
            "locate_eigenvalues: interval must lie compactly inside the parameter interval");
    if (options.zero_tol <= 0.0 || options.cluster_tol <= 0.0)
        throw std::invalid_argument("locate_eigenvalues: tolerances must be positive");

    const double xi1 = half_open.lo;
    const double xi2 = half_open.hi;
    const double step = options.grid_step > 0.0 ? options.grid_step : (xi2 - xi1) / 64.0;
    const std::size_t cells = std::max<std::size_t>(2, std::size_t(std::ceil((xi2 - xi1) / step)));
    std::vector<double> grid(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j)
        grid[j] = xi1 + (xi2 - xi1) * double(j) / double(cells);
    grid.back() = xi2;

    std::vector<std::vector<double>> values(grid.size());
    parallel_for(grid.size(), [&](std::size_t j) { values[j] = model.branch_values(grid[j]); });

    const std::size_t dim = model.dimension();
    std::vector<double> bands(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) bands[j] = zero_band(values[j], options.zero_tol);

    std::vector<BranchRoot> roots;
    for (std::size_t m = 0; m < dim; ++m) {
        // classify grid values: -1 below band, 0 inside, +1 above
        std::vector<int> state(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double v = values[j][m];
            state[j] = (v < -bands[j]) ? -1 : (v > bands[j] ? 1 : 0);
        }
        // strict sign changes between adjacent non-zero states
        for (std::size_t j = 0; j + 1 < grid.size(); ++j)
            if (state[j] * state[j + 1] == -1)
                roots.push_back(bisect_branch(model, m, grid[j], grid[j + 1], values[j][m],
                                              values[j + 1][m], options.max_bisect));
        // out-of-band dips: a strict local minimum of |v| whose value is
        // comparable to its per-cell variation may reach the band between
        // grid points; refine it before deciding
        for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
            if (state[j] == 0) continue;
            const double vj = std::abs(values[j][m]);
            if (!(vj < std::abs(values[j - 1][m]) && vj < std::abs(values[j + 1][m]))) continue;
            if (state[j - 1] * state[j] == -1 || state[j] * state[j + 1] == -1) continue;
            const double variation = 0.5 * (std::abs(values[j + 1][m] - values[j][m]) +
                                            std::abs(values[j][m] - values[j - 1][m]));
            if (vj > std::max(bands[j], variation)) continue;
            BranchRoot cand = refine_tangency(model, m, grid[j - 1], grid[j + 1]);
            const std::vector<double> at = model.branch_values(cand.lambda);
            if (std::abs(at[m]) <= zero_band(at, options.zero_tol)) roots.push_back(cand);
        }
        // zero-band runs: crossings through the band, or tangencies
        std::size_t j = 0;
        while (j < grid.size()) {
            if (state[j] != 0) {
                ++j;
                continue;
            }
            std::size_t jr = j;
            while (jr + 1 < grid.size() && state[jr + 1] == 0) ++jr;
            const bool has_left = j > 0;
            const bool has_right = jr + 1 < grid.size();
            const int left_state = has_left ? state[j - 1] : 0;
            const int right_state = has_right ? state[jr + 1] : 0;
            if (has_left && has_right && left_state * right_state == -1) {
                roots.push_back(bisect_branch(model, m, grid[j - 1], grid[jr + 1],
                                              values[j - 1][m], values[jr + 1][m],
                                              options.max_bisect));
            } else {
                const double lo = grid[has_left ? j - 1 : j];
                const double hi = grid[has_right ? jr + 1 : jr];
                BranchRoot cand = (lo < hi) ? refine_tangency(model, m, lo, hi)
                                            : BranchRoot{grid[j], m, 0.0, false};
                const std::vector<double> at = model.branch_values(cand.lambda);
                if (std::abs(at[m]) <= zero_band(at, options.zero_tol)) roots.push_back(cand);
            }
            j = jr + 1;
        }
    }

    std::sort(roots.begin(), roots.end(), [](const BranchRoot& a, const BranchRoot& b) {
        return a.lambda < b.lambda || (a.lambda == b.lambda && a.branch < b.branch);
    });

    // merge clusters closer than the cluster tolerance
    std::vector<LocatedEigenvalue> located;
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t k = i + 1;
        while (k < roots.size() &&
               roots[k].lambda - roots[k - 1].lambda <=
                   options.cluster_tol * (1.0 + std::abs(roots[k].lambda)))
            ++k;
        double lam = 0.0;
        double width = 0.0;
        bool flagged = false;
        for (std::size_t r = i; r < k; ++r) {
            lam += roots[r].lambda;
            width = std::max(width, roots[r].width);
            flagged = flagged || roots[r].flagged;
        }
        lam /= double(k - i);

        PencilModel::Evaluation eval = model.eval_form(lam);
        EigenDecomposition dec = generalized_eigen(eval.f, eval.m);
        const double band = zero_band(dec.eigenvalues, options.zero_tol);
        LocatedEigenvalue loc;
        loc.lambda0 = lam;
        loc.refined_width = width;
        loc.width_flagged = flagged;
        for (std::size_t m = 0; m < dim; ++m)
            if (std::abs(dec.eigenvalues[m]) <= band) loc.branch_indices.push_back(m + 1);
        loc.multiplicity = loc.branch_indices.size();
        loc.eigenvectors = Matrix(dim, loc.multiplicity);
        for (std::size_t c = 0; c < loc.multiplicity; ++c) {
            const std::size_t m = loc.branch_indices[c] - 1;
            for (std::size_t r2 = 0; r2 < dim; ++r2)
                loc.eigenvectors(r2, c) = dec.eigenvectors(r2, m);
        }
        if (loc.multiplicity > 0) located.push_back(std::move(loc));
        i = k;
    }

    // half-open filter by refined position, with endpoint ambiguity flags
    std::vector<LocatedEigenvalue> result;
    for (auto& loc : located) {
        const double ctol1 = options.cluster_tol * (1.0 + std::abs(xi1));
        const double ctol2 = options.cluster_tol * (1.0 + std::abs(xi2));
        loc.endpoint_ambiguous =
            std::abs(loc.lambda0 - xi1) <= ctol1 || std::abs(loc.lambda0 - xi2) <= ctol2;
        if (loc.lambda0 >= xi1 && loc.lambda0 < xi2) result.push_back(std::move(loc));
    }
    return result;
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Pass: return "PASS";
        case VerdictStatus::Fail: return "FAIL";
        case VerdictStatus::HypothesisFailed: return "HYPOTHESIS-FAILED";
        case VerdictStatus::NotApplicable: return "NOT-APPLICABLE";
    }
    return "UNKNOWN";
}

MonotoneCheck check_monotone(const PencilModel& model, const std::vector<double>& samples,
                             const std::vector<std::vector<Complex>>* probe_vectors) {
    if (samples.size() < 2)
        throw std::invalid_argument("check_monotone: need at least 2 samples");
    MonotoneCheck result;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const double l1 = samples[i];
        const double l2 = samples[i + 1];
        if (!(l1 < l2)) throw std::invalid_argument("check_monotone: samples must ascend");
        const HermitianMatrix d = model.eval_form(l1).f - model.eval_form(l2).f;
        ++result.pairs_checked;
        bool positive = true;
        if (probe_vectors) {
            for (const auto& y : *probe_vectors) {
                const double v = inner(d.matrix().apply(y), y).real();
                if (!(v > 0.0)) positive = false;
            }
        }
        if (positive) positive = cholesky_succeeds(d);
        if (!positive) {
            EigenDecomposition dec = hermitian_eigen(d);
            result.certified = false;
            result.lambda1 = l1;
            result.lambda2 = l2;
            result.min_eigenvalue = dec.eigenvalues.front();
            result.witness.resize(model.dimension());
            for (std::size_t r = 0; r < model.dimension(); ++r)
                result.witness[r] = dec.eigenvectors(r, 0);
            result.detail = "form difference F(" + std::to_string(l1) + ") - F(" +
                            std::to_string(l2) + ") is not positive definite (min eigenvalue " +
                            std::to_string(dec.eigenvalues.front()) + ")";
            return result;
        }
    }
    result.certified = true;
    result.detail = "form difference positive definite on " +
                    std::to_string(result.pairs_checked) + " consecutive sample pairs";
    return result;
}

NegativeTypeCheck check_negative_type(const PencilModel& model, const LocatedEigenvalue& located,
                                      double type_tol_rel) {
    NegativeTypeCheck result;
    if (!model.has_derivative()) {
        result.applicable = false;
        result.detail = "no form derivative supplied";
        return result;
    }
    if (located.multiplicity == 0 || located.eigenvectors.cols() == 0)
        throw std::invalid_argument("check_negative_type: located eigenvalue has no kernel basis");
    result.applicable = true;
    const HermitianMatrix d = model.eval_form_derivative(located.lambda0);
    const double tol = type_tol_rel * (1.0 + d.frobenius_norm());
    const std::size_t dim = model.dimension();
    const std::size_t k = located.eigenvectors.cols();

    std::vector<std::vector<Complex>> directions;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<Complex> y(dim);
        for (std::size_t r = 0; r < dim; ++r) y[r] = located.eigenvectors(r, c);
        directions.push_back(std::move(y));
    }
    if (k > 1) {
        std::mt19937_64 rng(0x5eedULL);
        std::normal_distribution<double> gauss;
        for (int extra = 0; extra < 8; ++extra) {
            std::vector<Complex> y(dim, Complex(0.0));
            for (std::size_t c = 0; c < k; ++c) {
                const Complex w(gauss(rng), gauss(rng));
                for (std::size_t r = 0; r < dim; ++r) y[r] += w * located.eigenvectors(r, c);
            }
            const double n = norm2(y);
            if (n == 0.0) continue;
            for (auto& v : y) v /= n;
            directions.push_back(std::move(y));
        }
    }

    result.pass = true;
    result.worst_value = -std::numeric_limits<double>::infinity();
    for (const auto& y : directions) {
        const double v = inner(d.matrix().apply(y), y).real();
        result.worst_value = std::max(result.worst_value, v);
        if (!(v < -tol)) result.pass = false;
    }
    result.detail = "max form-derivative value on the kernel: " +
                    std::to_string(result.worst_value);
    return result;
}

CountReport count_report(const PencilModel& model, Interval half_open,
                         const ReportOptions& options) {
    CountReport report;
    report.interval = half_open;
    report.located = locate_eigenvalues(model, half_open, options.locate);
    for (const auto& loc : report.located) report.eigenvalue_count += loc.multiplicity;

    const std::vector<double> lo_values = model.branch_values(half_open.lo);
    const std::vector<double> hi_values = model.branch_values(half_open.hi);
    report.nu_lo = inertia_of_values(lo_values, options.locate.zero_tol);
    report.nu_hi = inertia_of_values(hi_values, options.locate.zero_tol);

    std::size_t near1 = 0, near2 = 0;
    for (const auto& loc : report.located) {
        if (std::abs(loc.lambda0 - half_open.lo) <=
            options.locate.cluster_tol * (1.0 + std::abs(half_open.lo)))
            near1 += loc.multiplicity;
        if (std::abs(loc.lambda0 - half_open.hi) <=
            options.locate.cluster_tol * (1.0 + std::abs(half_open.hi)))
            near2 += loc.multiplicity;
    }
    report.endpoint_on_eigenvalue =
        report.nu_lo.zero > 0 || report.nu_hi.zero > 0 || near1 > 0 || near2 > 0;
    const std::size_t strict = report.eigenvalue_count - near1 - near2;
    report.count_excluding_endpoints = strict;
    report.count_including_endpoints =
        strict + std::max<std::size_t>(near1, report.nu_lo.zero) +
        std::max<std::size_t>(near2, report.nu_hi.zero);
    if (report.endpoint_on_eigenvalue)
        report.caveats.push_back(
            "an interval endpoint lies in the zero band of some branch; counts for both "
            "endpoint conventions: excluding=" +
            std::to_string(report.count_excluding_endpoints) +
            ", including=" + std::to_string(report.count_including_endpoints));

    const long dnu = report.delta_nu();
    const long n_signed = static_cast<long>(report.eigenvalue_count);
    {
        const bool ok = n_signed >= dnu;
        report.lower_bound.status = ok ? VerdictStatus::Pass : VerdictStatus::Fail;
        report.lower_bound.detail = "N=" + std::to_string(report.eigenvalue_count) +
                                    ", dnu=" + std::to_string(dnu) +
                                    (ok && n_signed > dnu ? " (strict inequality)" : "");
    }

    // equality under monotonicity of the form family
    if (model.provenance() == PencilModel::Provenance::Differential &&
        !model.flags().kernel_constant) {
        report.monotone_equality.status = VerdictStatus::NotApplicable;
        report.monotone_equality.detail =
            "constraint kernel varies with lambda; the form domain is not fixed";
    } else {
        std::vector<double> samples(options.monotone_samples);
        for (std::size_t i = 0; i < samples.size(); ++i)
            samples[i] = half_open.lo +
                         (half_open.hi - half_open.lo) * double(i) / double(samples.size() - 1);
        MonotoneCheck mono = check_monotone(model, samples);
        if (!mono.certified) {
            report.monotone_equality.status = VerdictStatus::HypothesisFailed;
            report.monotone_equality.detail = mono.detail;
        } else {
            const bool ok = n_signed == dnu;
            report.monotone_equality.status = ok ? VerdictStatus::Pass : VerdictStatus::Fail;
            report.monotone_equality.detail =
                mono.detail + "; N=" + std::to_string(report.eigenvalue_count) +
                ", dnu=" + std::to_string(dnu);
        }
    }

    // equality under the negative-type condition at every located root
    if (!model.has_derivative()) {
        report.negative_type_equality.status = VerdictStatus::NotApplicable;
        report.negative_type_equality.detail = "no form derivative supplied";
    } else if (!model.flags().derivative_consistent) {
        report.negative_type_equality.status = VerdictStatus::NotApplicable;
        report.negative_type_equality.detail =
            "supplied form derivative is inconsistent with finite differences";
    } else if (model.provenance() == PencilModel::Provenance::Differential &&
               !model.flags().kernel_constant) {
        report.negative_type_equality.status = VerdictStatus::NotApplicable;
        report.negative_type_equality.detail =
            "constraint kernel varies with lambda; the form domain is not fixed";
    } else {
        bool all_pass = true;
        std::string fail_detail;
        for (const auto& loc : report.located) {
            NegativeTypeCheck check = check_negative_type(model, loc);
            if (!check.pass) {
                all_pass = false;
                fail_detail = "negative-type condition fails at lambda0=" +
                              std::to_string(loc.lambda0) + " (" + check.detail + ")";
                break;
            }
        }
        if (!all_pass) {
            report.negative_type_equality.status = VerdictStatus::HypothesisFailed;
            report.negative_type_equality.detail = fail_detail;
        } else {
            const bool ok = n_signed == dnu;
            report.negative_type_equality.status = ok ? VerdictStatus::Pass : VerdictStatus::Fail;
            report.negative_type_equality.detail =
                "derivative negative on every located kernel; N=" +
                std::to_string(report.eigenvalue_count) + ", dnu=" + std::to_string(dnu);
        }
    }
    return report;
}

}  // namespace spectral

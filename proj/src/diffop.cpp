// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "spectral/eigen.hpp"
#include "spectral/numdiff.hpp"

namespace spectral {

namespace {

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

double coeff_derivative(const Expression& p, double lambda, double x, std::size_t order,
                        double a, double b) {
    if (order == 0) return p.evaluate(x, lambda);
    std::function<double(double)> f = [&p, lambda](double t) { return p.evaluate(t, lambda); };
    return numdiff::derivative<double>(f, x, order, numdiff::default_step(order, b - a), a, b);
}



// y^{[n+m]}(x) by the quasi-derivative recursion expanded with the Leibniz
// rule, so every y-derivative is taken directly from y (no nested numerical
// differentiation).
Complex quasi_derivative_at(const DifferentialProblem& pr, double lambda0,
                            const SmoothFunction& y, double x, std::size_t m) {
    const std::size_t n = pr.n;
    Complex acc = 0.0;
    for (std::size_t k = 0; k <= m; ++k) {
        const std::size_t s = m - k;  // outer derivative order
        const double sign = (s % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t t = 0; t <= s; ++t) {
            const double pk_t =
                coeff_derivative(pr.coefficients[k], lambda0, x, t, pr.a, pr.b);
            if (pk_t == 0.0) continue;
            const Complex yj = y.derivative(x, (n - k) + (s - t), pr.a, pr.b);
            acc += sign * binomial(s, t) * pk_t * yj;
        }
    }
    return acc;
}

// strong-form action S(lambda0) y at a point, via the same Leibniz expansion
Complex strong_action_at(const DifferentialProblem& pr, double lambda0,
                         const SmoothFunction& y, double x) {
    const std::size_t n = pr.n;
    Complex acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t s = n - k;
        const double sign = (s % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t t = 0; t <= s; ++t) {
            const double pk_t =
                coeff_derivative(pr.coefficients[k], lambda0, x, t, pr.a, pr.b);
            if (pk_t == 0.0) continue;
            const Complex yj = y.derivative(x, (n - k) + (s - t), pr.a, pr.b);
            acc += sign * binomial(s, t) * pk_t * yj;
        }
    }
    return acc;
}

struct Quadrature {
    std::vector<double> x;
    std::vector<double> w;
};

// composite Gauss-Legendre, 6 nodes per panel
Quadrature composite_quadrature(double a, double b, std::size_t panels) {
    static const double xi[6] = {0.03376524289842399, 0.16939530676686776, 0.38069040695840156,
                                 0.61930959304159844, 0.83060469323313224, 0.96623475710157601};
    static const double wi[6] = {0.08566224618958517, 0.18038078652406930, 0.23395696728634552,
                                 0.23395696728634552, 0.18038078652406930, 0.08566224618958517};
    Quadrature q;
    const double h = (b - a) / double(panels);
    q.x.reserve(panels * 6);
    q.w.reserve(panels * 6);
    for (std::size_t p = 0; p < panels; ++p)
        for (int g = 0; g < 6; ++g) {
            q.x.push_back(a + (double(p) + xi[g]) * h);
            q.w.push_back(wi[g] * h);
        }
    return q;
}

}  // namespace

void validate(const DifferentialProblem& pr) {
    if (pr.n == 0) throw std::invalid_argument("problem: order parameter n must be at least 1");
    if (!(pr.a < pr.b)) throw std::invalid_argument("problem: interval must satisfy a < b");
    if (!(pr.lambda_interval.lo < pr.lambda_interval.hi))
        throw std::invalid_argument("problem: empty lambda interval");
    if (pr.coefficients.size() != pr.n + 1)
        throw std::invalid_argument("problem: need exactly n+1 coefficient expressions");
    for (const auto& c : pr.coefficients)
        if (!c.is_valid()) throw std::invalid_argument("problem: empty coefficient expression");
    if (!pr.coefficient_derivatives.empty() && pr.coefficient_derivatives.size() != pr.n + 1)
        throw std::invalid_argument(
            "problem: coefficient derivatives must match the coefficients (n+1 expressions)");
    if (!pr.boundary) throw std::invalid_argument("problem: missing boundary condition");
    if (pr.boundary->size() != 2 * pr.n)
        throw std::invalid_argument("problem: boundary size must be 2n");
    if (pr.mesh < 2) throw std::invalid_argument("problem: mesh must have at least 2 elements");

    // positivity of the leading coefficient, sampled on a 64x64 grid
    for (std::size_t i = 0; i < 64; ++i) {
        const double lambda = pr.lambda_interval.lo +
                              pr.lambda_interval.length() * (double(i) + 0.5) / 64.0;
        for (std::size_t j = 0; j < 64; ++j) {
            const double x = pr.a + (pr.b - pr.a) * double(j) / 63.0;
            const double v = pr.coefficients[0].evaluate(x, lambda);
            if (!(v > 0.0))
                throw NonPositiveLeadingCoefficientError(
                    x, v,
                    "leading coefficient not positive at (x=" + std::to_string(x) +
                        ", lambda=" + std::to_string(lambda) + ")");
        }
    }
}

namespace {

struct CompiledProblem {
    DifferentialProblem problem;
    ElementBasis basis;
    std::shared_ptr<const ReductionMap> fixed_reduction;  // null: re-reduce per lambda

    CompiledProblem(DifferentialProblem pr, ElementBasis bs)
        : problem(std::move(pr)), basis(std::move(bs)) {}

    std::vector<CoefficientFn> coefficient_fns(double lambda) const {
        std::vector<CoefficientFn> fns;
        fns.reserve(problem.coefficients.size());
        for (const auto& expr : problem.coefficients)
            fns.push_back([&expr, lambda](double x) { return expr.evaluate(x, lambda); });
        return fns;
    }

    std::vector<CoefficientFn> derivative_fns(double lambda) const {
        std::vector<CoefficientFn> fns;
        fns.reserve(problem.coefficient_derivatives.size());
        for (const auto& expr : problem.coefficient_derivatives)
            fns.push_back([&expr, lambda](double x) { return expr.evaluate(x, lambda); });
        return fns;
    }

    std::shared_ptr<const ReductionMap> reduction_at(const Matrix& u) const {
        if (fixed_reduction) return fixed_reduction;
        const ConstraintData constraint = constraint_data(u, problem.one_tol);
        return std::make_shared<const ReductionMap>(
            ReductionMap::orthogonal_to_kernel(basis, constraint));
    }
};

}  // namespace

PencilModel compile(const DifferentialProblem& problem) {
    validate(problem);
    auto data = std::make_shared<CompiledProblem>(problem,
                                                  ElementBasis(problem.n, problem.a, problem.b,
                                                               problem.mesh));
    PencilModel::Flags flags;

    // rank and kernel constancy across the parameter interval
    const Interval li = problem.lambda_interval;
    std::vector<double> grid(32);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = li.lo + li.length() * (double(i) + 0.5) / double(grid.size());
    const RankConstancyResult rank_res =
        rank_constancy_check(*problem.boundary, grid, problem.one_tol);
    flags.rank_constant = rank_res.constant;
    if (!rank_res.constant)
        flags.warnings.push_back(
            "rank(U(lambda)-1) is not constant on the parameter interval; equality "
            "validators are disabled");

    flags.kernel_constant = rank_res.constant;
    if (rank_res.constant && !problem.boundary->is_lambda_independent()) {
        const ConstraintData c0 =
            constraint_data(problem.boundary->evaluate(grid.front()), problem.one_tol);
        const Matrix p0 = c0.kernel_basis * c0.kernel_basis.adjoint();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const ConstraintData ci =
                constraint_data(problem.boundary->evaluate(grid[i]), problem.one_tol);
            const Matrix pi = ci.kernel_basis * ci.kernel_basis.adjoint();
            if ((pi - p0).frobenius_norm() > 1e-6) {
                flags.kernel_constant = false;
                flags.warnings.push_back(
                    "ker(U(lambda)-1) varies with lambda; the form domain is re-reduced per "
                    "lambda and equality validators are disabled");
                break;
            }
        }
    }

    const double lambda_ref = 0.5 * (li.lo + li.hi);
    if (flags.kernel_constant) {
        const ConstraintData constraint =
            constraint_data(problem.boundary->evaluate(lambda_ref), problem.one_tol);
        data->fixed_reduction = std::make_shared<const ReductionMap>(
            ReductionMap::orthogonal_to_kernel(data->basis, constraint));
    }

    const std::size_t dimension =
        data->fixed_reduction
            ? data->fixed_reduction->reduced_dim()
            : data->reduction_at(problem.boundary->evaluate(lambda_ref))->reduced_dim();

    PencilModel::FormFn form = [data](double lambda) -> PencilModel::Evaluation {
        const Matrix u = data->problem.boundary->evaluate(lambda);
        const BoundaryMatrix bm = boundary_matrix(u, data->problem.one_tol);
        const auto reduction = data->reduction_at(u);
        AssembledForm af =
            assemble_form(data->basis, data->coefficient_fns(lambda), &bm.a, reduction);
        return PencilModel::Evaluation{std::move(af.f), std::move(af.m)};
    };

    PencilModel::FormDerivativeFn deriv;
    if (!problem.coefficient_derivatives.empty()) {
        deriv = [data](double lambda) -> HermitianMatrix {
            const Matrix u = data->problem.boundary->evaluate(lambda);
            const auto reduction = data->reduction_at(u);
            HermitianMatrix aprime = HermitianMatrix::zero(2 * data->problem.n);
            if (!data->problem.boundary->is_lambda_independent())
                aprime = boundary_matrix_derivative(*data->problem.boundary, lambda,
                                                    1e-5 * (1.0 + std::abs(lambda)),
                                                    data->problem.one_tol);
            return assemble_form_derivative(data->basis, data->derivative_fns(lambda), &aprime,
                                            reduction);
        };
    }

    // finite-difference guard on the supplied lambda-derivatives
    if (deriv) {
        const double h = 1e-5 * (1.0 + std::abs(lambda_ref));
        const HermitianMatrix d_exact = deriv(lambda_ref);
        const Matrix u_p = data->problem.boundary->evaluate(lambda_ref + h);
        const Matrix u_m = data->problem.boundary->evaluate(lambda_ref - h);
        const BoundaryMatrix a_p = boundary_matrix(u_p, problem.one_tol);
        const BoundaryMatrix a_m = boundary_matrix(u_m, problem.one_tol);
        const auto red = data->reduction_at(data->problem.boundary->evaluate(lambda_ref));
        const AssembledForm f_p =
            assemble_form(data->basis, data->coefficient_fns(lambda_ref + h), &a_p.a, red);
        const AssembledForm f_m =
            assemble_form(data->basis, data->coefficient_fns(lambda_ref - h), &a_m.a, red);
        Matrix fd = f_p.f.matrix();
        fd -= f_m.f.matrix();
        fd *= Complex(1.0 / (2.0 * h));
        fd -= d_exact.matrix();
        const double err = fd.frobenius_norm();
        const double tol =
            1e-4 * (1.0 + d_exact.frobenius_norm()) + 1e-9 * f_p.f.frobenius_norm();
        if (err > tol) {
            flags.derivative_consistent = false;
            flags.warnings.push_back(
                "supplied coefficient derivatives disagree with finite differences "
                "(residual " +
                std::to_string(err) + "); the derivative sign test is disabled");
        }
    }

    return PencilModel({li.lo, li.hi}, dimension, std::move(form), std::move(deriv),
                       PencilModel::Provenance::Differential, std::move(flags));
}

double semibounded_shift(const DifferentialProblem& problem, double lambda0,
                         const SemiboundedSearch& search) {
    PencilModel model = compile(problem);
    const PencilModel::Evaluation eval = model.eval_form(lambda0);
    auto is_psd = [&](double mu) {
        return cholesky_succeeds(eval.f - eval.m.scaled(mu));
    };
    double radius = search.initial_radius > 0.0 ? search.initial_radius
                                                : 1.0 + eval.f.frobenius_norm();
    double lo = -radius;
    int guard = 0;
    while (!is_psd(lo) && guard++ < 60) lo *= 2.0;
    if (!is_psd(lo))
        throw std::runtime_error("semibounded_shift: no semibounded shift found");
    double hi = radius;
    guard = 0;
    while (is_psd(hi) && guard++ < 60) hi *= 2.0;
    for (int it = 0; it < search.bisect_steps; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (is_psd(mid))
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * (1.0 + std::abs(mid))) break;
    }
    return lo;
}

Complex SmoothFunction::derivative(double x, std::size_t order, double lo, double hi) const {
    if (order == 0) return value_(x);
    if (jet_) return jet_(x, order);
    return numdiff::derivative<Complex>(value_, x, order,
                                        numdiff::default_step(order, hi - lo), lo, hi);
}

QuasiDerivativeTrace quasi_derivative_trace(const DifferentialProblem& pr, double lambda0,
                                            const SmoothFunction& y) {
    validate(pr);
    const std::size_t n = pr.n;
    QuasiDerivativeTrace out;
    out.values.resize(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        out.values[m][0] = quasi_derivative_at(pr, lambda0, y, pr.a, m);
        out.values[m][1] = quasi_derivative_at(pr, lambda0, y, pr.b, m);
    }
    out.y_hat.resize(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        out.y_hat[j] = y.derivative(pr.a, j, pr.a, pr.b);
        out.y_hat[n + j] = y.derivative(pr.b, j, pr.a, pr.b);
    }
    out.y_vee.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.y_vee[i] = out.values[n - 1 - i][0];        // y^{[2n-1]}(a) down to y^{[n]}(a)
        out.y_vee[n + i] = -out.values[n - 1 - i][1];   // negated at b
    }

    const Matrix u = pr.boundary->evaluate(lambda0);
    std::vector<Complex> residual = u.apply(out.y_vee);
    const std::vector<Complex> uy = u.apply(out.y_hat);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        residual[i] -= out.y_vee[i];
        residual[i] += Complex(0.0, 1.0) * (uy[i] + out.y_hat[i]);
    }
    out.bc_residual = norm2(residual);
    return out;
}

FormIdentityResult form_identity_check(const DifferentialProblem& pr, double lambda0,
                                       const SmoothFunction& y) {
    FormIdentityResult result;
    const QuasiDerivativeTrace trace = quasi_derivative_trace(pr, lambda0, y);
    result.bc_residual = trace.bc_residual;
    const double scale = 1.0 + norm2(trace.y_hat) + norm2(trace.y_vee);
    if (trace.bc_residual > 1e-6 * scale) {
        result.applicable = false;
        return result;
    }
    result.applicable = true;

    const std::size_t n = pr.n;
    const Quadrature quad = composite_quadrature(pr.a, pr.b, 128);

    Complex strong = 0.0;
    for (std::size_t g = 0; g < quad.x.size(); ++g)
        strong += quad.w[g] * strong_action_at(pr, lambda0, y, quad.x[g]) *
                  std::conj(y(quad.x[g]));
    result.strong_value = strong;

    Complex form = 0.0;
    for (std::size_t g = 0; g < quad.x.size(); ++g) {
        const double x = quad.x[g];
        for (std::size_t k = 0; k <= n; ++k) {
            const double pk = pr.coefficients[k].evaluate(x, lambda0);
            if (pk == 0.0) continue;
            const Complex yd = y.derivative(x, n - k, pr.a, pr.b);
            form += quad.w[g] * pk * std::norm(yd);
        }
    }
    const BoundaryMatrix bm = boundary_matrix(pr.boundary->evaluate(lambda0), pr.one_tol);
    form += inner(bm.a.matrix().apply(trace.y_hat), trace.y_hat);
    result.form_value = form;
    result.residual = std::abs(strong - form);
    return result;
}

Complex ComplexPolynomial::value(double x) const {
    Complex acc = 0.0;
    for (std::size_t p = coeffs_.size(); p-- > 0;) acc = acc * x + coeffs_[p];
    return acc;
}

Complex ComplexPolynomial::derivative(double x, std::size_t order) const {
    Complex acc = 0.0;
    for (std::size_t p = coeffs_.size(); p-- > order;) {
        double f = 1.0;
        for (std::size_t i = 0; i < order; ++i) f *= double(p - i);
        acc = acc * x + f * coeffs_[p];
    }
    return acc;
}

std::function<Complex(double)> ComplexPolynomial::as_function() const {
    ComplexPolynomial copy = *this;
    return [copy](double x) { return copy.value(x); };
}

SmoothFunction ComplexPolynomial::as_smooth() const {
    ComplexPolynomial copy = *this;
    return SmoothFunction([copy](double x) { return copy.value(x); },
                          [copy](double x, std::size_t order) {
                              return copy.derivative(x, order);
                          });
}

ComplexPolynomial admissible_polynomial(const DifferentialProblem& pr, double lambda0,
                                        const std::vector<Complex>& x_parameter) {
    validate(pr);
    const std::size_t n = pr.n;
    if (x_parameter.size() != 2 * n)
        throw std::invalid_argument("admissible_polynomial: parameter must have size 2n");
    const Matrix u = pr.boundary->evaluate(lambda0);
    const BoundaryPair pair = boundary_pair(u, x_parameter);

    // endpoint derivative targets: orders 0..n-1 from Y, orders n..2n-1 from
    // the quasi-derivative relations solved top coefficient first
    std::array<std::vector<Complex>, 2> target;  // [end][order]
    const double ends[2] = {pr.a, pr.b};
    for (int e = 0; e < 2; ++e) {
        target[e].assign(2 * n, Complex(0.0));
        for (std::size_t j = 0; j < n; ++j) target[e][j] = pair.y[std::size_t(e) * n + j];
    }
    for (int e = 0; e < 2; ++e) {
        const double x = ends[e];
        const double p0 = pr.coefficients[0].evaluate(x, lambda0);
        for (std::size_t m = 0; m < n; ++m) {
            // y^{[n+m]}(end) target with the b-side sign convention
            const Complex within =
                (e == 0) ? pair.z[n - 1 - m] : -pair.z[2 * n - 1 - m];
            // subtract every Leibniz term except (k=0, t=0)
            Complex rest = 0.0;
            for (std::size_t k = 0; k <= m; ++k) {
                const std::size_t s = m - k;
                const double sign = (s % 2 == 0) ? 1.0 : -1.0;
                for (std::size_t t = 0; t <= s; ++t) {
                    if (k == 0 && t == 0) continue;
                    const double pk_t =
                        coeff_derivative(pr.coefficients[k], lambda0, x, t, pr.a, pr.b);
                    if (pk_t == 0.0) continue;
                    rest += sign * binomial(s, t) * pk_t * target[e][(n - k) + (s - t)];
                }
            }
            const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;
            target[e][n + m] = sign_m * (within - rest) / p0;
        }
    }

    // two-point Hermite interpolation in powers of (x - a), degree 4n-1
    const std::size_t dim = 4 * n;
    const double len = pr.b - pr.a;
    std::vector<std::vector<Complex>> sys(dim, std::vector<Complex>(dim, Complex(0.0)));
    std::vector<Complex> rhs(dim, Complex(0.0));
    for (int e = 0; e < 2; ++e) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const std::size_t row = std::size_t(e) * 2 * n + j;
            for (std::size_t p = j; p < dim; ++p) {
                double f = 1.0;
                for (std::size_t i = 0; i < j; ++i) f *= double(p - i);
                sys[row][p] = (e == 0) ? Complex(p == j ? f : 0.0)
                                       : Complex(f * std::pow(len, double(p - j)));
            }
            rhs[row] = target[e][j];
        }
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::abs(sys[r][col]) > std::abs(sys[piv][col])) piv = r;
        std::swap(sys[piv], sys[col]);
        std::swap(rhs[piv], rhs[col]);
        if (sys[col][col] == Complex(0.0))
            throw std::runtime_error("admissible_polynomial: singular interpolation system");
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col) continue;
            const Complex f = sys[r][col] / sys[col][col];
            if (f == Complex(0.0)) continue;
            for (std::size_t c = col; c < dim; ++c) sys[r][c] -= f * sys[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<Complex> shifted(dim);
    for (std::size_t i = 0; i < dim; ++i) shifted[i] = rhs[i] / sys[i][i];

    // expand powers of (x-a) into plain monomials
    std::vector<Complex> mono(dim, Complex(0.0));
    for (std::size_t p = 0; p < dim; ++p) {
        // (x - a)^p = sum_q C(p,q) (-a)^{p-q} x^q
        for (std::size_t q = 0; q <= p; ++q)
            mono[q] += shifted[p] * binomial(p, q) * std::pow(-pr.a, double(p - q));
    }
    return ComplexPolynomial(std::move(mono));
}

}  // namespace spectral

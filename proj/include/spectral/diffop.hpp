// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <type_traits>
#include <functional>
#include <optional>

#include "spectral/boundary.hpp"
#include "spectral/expression.hpp"
#include "spectral/galerkin.hpp"
#include "spectral/pencil.hpp"

namespace spectral {

/// Differential problem of order 2n on [a, b]: coefficients p_0..p_n of the
/// divergence-form expression, boundary conditions parametrized by a 2n x 2n
/// unitary family, and a mesh for the conforming discretization.
struct DifferentialProblem {
    std::size_t n = 1;
    double a = 0.0;
    double b = 1.0;
    Interval lambda_interval;
    std::vector<Expression> coefficients;             // p_0 .. p_n
    std::vector<Expression> coefficient_derivatives;  // optional: d p_k / d lambda
    std::optional<UnitaryBoundary> boundary;
    std::size_t mesh = 64;
    double one_tol = 1e-8;
};

/// Structural checks plus positivity of p_0 sampled on a 64x64 grid of
/// [a,b] x (sigma,tau). Throws on violation.
void validate(const DifferentialProblem& problem);

/// Discretizes the problem: for each lambda the form matrix is assembled
/// from the coefficients, the boundary matrix of U(lambda) and the trace
/// constraint, reduced to the constraint subspace. Runs the rank-constancy
/// diagnostic on a 32-point grid and, when derivatives are supplied, a
/// finite-difference consistency check; outcomes land in the model flags.
PencilModel compile(const DifferentialProblem& problem);

struct SemiboundedSearch {
    int bisect_steps = 120;
    double initial_radius = 0.0;  // 0: 1 + ||F||_F
};

/// Largest mu (up to bisection resolution) with F(lambda0) - mu M positive
/// semidefinite, probed by shifted Cholesky. A discrete lower bound of the
/// form at lambda0.
double semibounded_shift(const DifferentialProblem& problem, double lambda0,
                         const SemiboundedSearch& search = {});

/// Test function for the strong-form validators: a value callable plus,
/// optionally, an exact derivative evaluator (order 0 = the value). Without
/// one, derivatives fall back to finite-difference stencils clamped into the
/// problem interval; exact jets avoid the roundoff amplification of
/// one-sided stencils at the endpoints.
class SmoothFunction {
public:
    using Value = std::function<Complex(double)>;
    using Jet = std::function<Complex(double, std::size_t)>;

    template <typename F,
              typename = std::enable_if_t<std::is_invocable_r_v<Complex, F, double>>>
    SmoothFunction(F value) : value_(std::move(value)) {}  // NOLINT: implicit by design
    SmoothFunction(Value value, Jet jet) : value_(std::move(value)), jet_(std::move(jet)) {}

    Complex operator()(double x) const { return value_(x); }
    Complex derivative(double x, std::size_t order, double lo, double hi) const;
    const Value& value_fn() const { return value_; }

private:
    Value value_;
    Jet jet_;
};

/// Quasi-derivative traces of a smooth function: values[m] holds
/// y^{[n+m]}(a) and y^{[n+m]}(b) for m = 0..n, plus the assembled boundary
/// vectors and the residual of the boundary condition at lambda0.
struct QuasiDerivativeTrace {
    std::vector<std::array<Complex, 2>> values;
    std::vector<Complex> y_hat;   // (y(a),...,y^{(n-1)}(a), y(b),...,y^{(n-1)}(b))
    std::vector<Complex> y_vee;   // quasi-derivative vector, b-entries negated
    double bc_residual = 0.0;
};

QuasiDerivativeTrace quasi_derivative_trace(const DifferentialProblem& problem, double lambda0,
                                            const SmoothFunction& y);

/// Compares <S(lambda0) y, y> computed from the strong form (numerical
/// derivatives + quadrature) with the integro-boundary form value. Not
/// applicable when y violates the boundary conditions.
struct FormIdentityResult {
    bool applicable = false;
    Complex strong_value;
    Complex form_value;
    double residual = 0.0;
    double bc_residual = 0.0;
};

FormIdentityResult form_identity_check(const DifferentialProblem& problem, double lambda0,
                                       const SmoothFunction& y);

/// Polynomial with complex coefficients (ascending powers); exact
/// derivatives. Used to build admissible test functions.
class ComplexPolynomial {
public:
    ComplexPolynomial() = default;
    explicit ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

    Complex value(double x) const;
    Complex derivative(double x, std::size_t order) const;
    std::function<Complex(double)> as_function() const;
    /// Value plus exact derivative jet.
    SmoothFunction as_smooth() const;
    const std::vector<Complex>& coefficients() const { return coeffs_; }

private:
    std::vector<Complex> coeffs_;
};

/// Builds a polynomial in the domain of the differential operator at
/// lambda0: its boundary vectors are the pair Y=(U-1)X, Z=-i(U+1)X, so the
/// boundary condition holds by construction. Degree 4n-1.
ComplexPolynomial admissible_polynomial(const DifferentialProblem& problem, double lambda0,
                                        const std::vector<Complex>& x_parameter);

}  // namespace spectral

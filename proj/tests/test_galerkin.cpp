// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <random>

#include "spectral/eigen.hpp"
#include "spectral/galerkin.hpp"
#include "support/generators.hpp"

using namespace spectral;
using Catch::Approx;

namespace {

std::shared_ptr<const ReductionMap> reduction_for(const ElementBasis& basis, const Matrix& u) {
    const ConstraintData cd = constraint_data(u);
    return std::make_shared<const ReductionMap>(
        ReductionMap::orthogonal_to_kernel(basis, cd));
}

Matrix minus_identity(std::size_t n) {
    Matrix m = Matrix::identity(n);
    m *= Complex(-1.0);
    return m;
}

const std::vector<CoefficientFn> kLaplace = {[](double) { return 1.0; },
                                             [](double) { return 0.0; }};

}  // namespace

TEST_CASE("basis shape and trace dofs") {
    const ElementBasis second_order = build_basis(2, 0.0, 1.0, 4);
    CHECK(second_order.dofs() == 10);
    const auto& tr2 = second_order.trace_dof_indices();
    REQUIRE(tr2.size() == 4);
    CHECK(tr2[0] == 0);  // y(a)
    CHECK(tr2[1] == 1);  // y'(a)
    CHECK(tr2[2] == 8);  // y(b)
    CHECK(tr2[3] == 9);  // y'(b)

    // quadratic elements for first-order forms: endpoint + midpoint values
    const ElementBasis first_order = build_basis(1, 0.0, 1.0, 4);
    CHECK(first_order.dofs() == 9);
    const auto& tr1 = first_order.trace_dof_indices();
    REQUIRE(tr1.size() == 2);
    CHECK(tr1[0] == 0);
    CHECK(tr1[1] == 8);

    CHECK_THROWS_AS(build_basis(1, 1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(1, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_basis(0, 0.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("interpolating sin reproduces the Dirichlet energy integral") {
    const ElementBasis basis = build_basis(1, 0.0, M_PI, 64);
    const std::vector<double> c =
        basis.interpolate({[](double x) { return std::sin(x); }});
    const double energy = basis.energy(c, kLaplace);
    CHECK(energy == Approx(M_PI / 2.0).margin(1e-4));
}

TEST_CASE("hermite interpolation reproduces nodal derivatives exactly") {
    const ElementBasis basis = build_basis(2, 0.0, 1.0, 8);
    // y = x^3 lies in the cubic space: energies are exact up to quadrature
    const std::vector<double> c = basis.interpolate(
        {[](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; }});
    const std::vector<CoefficientFn> bending = {
        [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    // integral |y''|^2 = integral 36 x^2 = 12
    CHECK(basis.energy(c, bending) == Approx(12.0).margin(1e-10));
}

TEST_CASE("assembly with zero coefficients and no boundary term vanishes") {
    const ElementBasis basis = build_basis(1, 0.0, 1.0, 4);
    const std::vector<CoefficientFn> zeros = {[](double) { return 1.0; },
                                              [](double) { return 0.0; }};
    // p_0 positivity applies to the form assembly; use the derivative entry
    // point for the all-zero case
    const std::vector<CoefficientFn> allzero = {[](double) { return 0.0; },
                                                [](double) { return 0.0; }};
    const HermitianMatrix f =
        assemble_form_derivative(basis, allzero, nullptr, nullptr);
    CHECK(f.frobenius_norm() == 0.0);
    (void)zeros;
}

TEST_CASE("non-positive leading coefficient is rejected with a location") {
    const ElementBasis basis = build_basis(1, 0.0, 1.0, 4);
    const std::vector<CoefficientFn> sign_change = {[](double x) { return 0.5 - x; },
                                                    [](double) { return 0.0; }};
    CHECK_THROWS_AS(assemble_form(basis, sign_change, nullptr, nullptr),
                    NonPositiveLeadingCoefficientError);
    try {
        assemble_form(basis, sign_change, nullptr, nullptr);
    } catch (const NonPositiveLeadingCoefficientError& e) {
        CHECK(e.x > 0.5);
        CHECK(e.value <= 0.0);
    }
}

TEST_CASE("Dirichlet model: smallest eigenvalue at 64 elements") {
    const ElementBasis basis = build_basis(1, 0.0, M_PI, 64);
    const BoundaryMatrix a = boundary_matrix(Matrix::identity(2));
    const AssembledForm form =
        assemble_form(basis, kLaplace, &a.a, reduction_for(basis, Matrix::identity(2)));
    CHECK(form.constraint_reduced);
    CHECK(form.f.dim() == basis.dofs() - 2);
    const auto values = generalized_eigenvalues(form.f, form.m);
    CHECK(values[0] == Approx(1.0).margin(1e-6));
}

TEST_CASE("Neumann model: smallest eigenvalue is zero, no constraint") {
    const ElementBasis basis = build_basis(1, 0.0, M_PI, 64);
    const Matrix u = minus_identity(2);
    const BoundaryMatrix a = boundary_matrix(u);
    CHECK(a.a.frobenius_norm() <= 1e-12);
    const AssembledForm form = assemble_form(basis, kLaplace, &a.a, reduction_for(basis, u));
    CHECK_FALSE(form.constraint_reduced);
    CHECK(form.f.dim() == basis.dofs());
    const auto values = generalized_eigenvalues(form.f, form.m);
    CHECK(std::abs(values[0]) <= 1e-8);
    CHECK(values[1] == Approx(1.0).margin(1e-6));
}

TEST_CASE("mass matrix is positive definite on every mesh") {
    for (std::size_t elements : {2, 5, 16, 33}) {
        for (std::size_t n : {1, 2}) {
            const ElementBasis basis = build_basis(n, -1.0, 2.0, elements);
            std::vector<CoefficientFn> ones(n + 1, [](double) { return 0.0; });
            ones[0] = [](double) { return 1.0; };
            const AssembledForm form = assemble_form(basis, ones, nullptr, nullptr);
            CHECK_NOTHROW(cholesky(form.m));
        }
    }
}

TEST_CASE("constraint correctness: reduced vectors have admissible traces") {
    std::mt19937_64 rng(321);
    const ElementBasis basis = build_basis(2, 0.0, 1.0, 6);
    const Matrix u = testgen::unitary_from_angles(rng, {0.0, 1.0, -1.3, 0.0});
    const ConstraintData cd = constraint_data(u);
    REQUIRE(cd.kernel_dim() == 2);
    const auto red = std::make_shared<const ReductionMap>(
        ReductionMap::orthogonal_to_kernel(basis, cd));
    CHECK(red->reduced_dim() == basis.dofs() - 2);

    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> c(red->reduced_dim());
        for (auto& v : c) v = Complex(g(rng), g(rng));
        const std::vector<Complex> full = red->expand(c);
        // trace of the expanded vector must be orthogonal to the kernel
        const auto& tdofs = basis.trace_dof_indices();
        std::vector<Complex> trace(tdofs.size());
        for (std::size_t i = 0; i < tdofs.size(); ++i) trace[i] = full[tdofs[i]];
        const Matrix kt = cd.kernel_basis.adjoint();
        CHECK(norm2(kt.apply(trace)) <= 1e-10 * (1.0 + norm2(trace)));
    }

    // dense form of the reduction has orthonormal columns
    const Matrix dense = red->dense();
    Matrix gram = dense.adjoint() * dense;
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    CHECK(gram.frobenius_norm() <= 1e-12);
}

TEST_CASE("monotone convergence of Dirichlet eigenvalues under refinement") {
    std::vector<std::vector<double>> per_mesh;
    for (std::size_t elements : {8, 16, 32, 64}) {
        const ElementBasis basis = build_basis(1, 0.0, M_PI, elements);
        const BoundaryMatrix a = boundary_matrix(Matrix::identity(2));
        const AssembledForm form =
            assemble_form(basis, kLaplace, &a.a, reduction_for(basis, Matrix::identity(2)));
        per_mesh.push_back(generalized_eigenvalues(form.f, form.m));
    }
    for (std::size_t m = 0; m < 4; ++m) {
        const double analytic = double((m + 1) * (m + 1));
        for (std::size_t level = 0; level < per_mesh.size(); ++level) {
            CHECK(per_mesh[level][m] >= analytic - 1e-12);
            if (level > 0) CHECK(per_mesh[level][m] <= per_mesh[level - 1][m] + 1e-12);
        }
    }
}

TEST_CASE("form derivative: mass-matrix identity and finite-difference consistency") {
    const ElementBasis basis = build_basis(1, 0.0, M_PI, 16);

    // d p_n / d lambda = -1 gives exactly -M
    const std::vector<CoefficientFn> dcoeff = {[](double) { return 0.0; },
                                               [](double) { return -1.0; }};
    const HermitianMatrix fprime = assemble_form_derivative(basis, dcoeff, nullptr, nullptr);
    std::vector<CoefficientFn> mass_only(2, [](double) { return 0.0; });
    mass_only[0] = [](double) { return 1.0; };
    const AssembledForm mass_form = assemble_form(basis, mass_only, nullptr, nullptr);
    CHECK((fprime.matrix() + mass_form.m.matrix()).frobenius_norm() <= 1e-14);

    // all-zero derivatives give the zero matrix
    const std::vector<CoefficientFn> zero = {[](double) { return 0.0; },
                                             [](double) { return 0.0; }};
    CHECK(assemble_form_derivative(basis, zero, nullptr, nullptr).frobenius_norm() == 0.0);

    // d p_0/d lambda = -1: matches (F(l+h) - F(l-h)) / 2h on random
    // polynomial coefficients in lambda
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double c0 = unif(rng), c1 = unif(rng), c2 = unif(rng);
        auto p0 = [c0, c1](double lam) {
            return CoefficientFn([c0, c1, lam](double x) { return c0 + c1 * lam * (1.0 + 0.1 * x); });
        };
        auto p1 = [c2](double lam) {
            return CoefficientFn([c2, lam](double x) { return c2 * lam * lam * x; });
        };
        auto dp0 = [c1](double lam) {
            (void)lam;
            return CoefficientFn([c1](double x) { return c1 * (1.0 + 0.1 * x); });
        };
        auto dp1 = [c2](double lam) {
            return CoefficientFn([c2, lam](double x) { return 2.0 * c2 * lam * x; });
        };
        const double lam = unif(rng);
        const double h = 1e-4;
        const HermitianMatrix d = assemble_form_derivative(
            basis, {dp0(lam), dp1(lam)}, nullptr, nullptr);
        const AssembledForm fp = assemble_form(basis, {p0(lam + h), p1(lam + h)}, nullptr, nullptr);
        const AssembledForm fm = assemble_form(basis, {p0(lam - h), p1(lam - h)}, nullptr, nullptr);
        Matrix fd = fp.f.matrix();
        fd -= fm.f.matrix();
        fd *= Complex(1.0 / (2.0 * h));
        fd -= d.matrix();
        CHECK(fd.frobenius_norm() <= 1e-7 * (1.0 + d.frobenius_norm()));
    }
}

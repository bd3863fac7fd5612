// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spectral/pencil.hpp"
#include "support/generators.hpp"

using namespace spectral;
using Catch::Approx;

namespace {

HermitianMatrix scalar(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return HermitianMatrix(m);
}

// F(lambda) = diag(1 - lambda, 4 - lambda)
PencilModel diag_model() {
    Matrix c0(2, 2), c1(2, 2);
    c0(0, 0) = 1;
    c0(1, 1) = 4;
    c1(0, 0) = -1;
    c1(1, 1) = -1;
    return PencilModel::polynomial_family({HermitianMatrix(c0), HermitianMatrix(c1)},
                                          std::nullopt, {-2.0, 8.0});
}

// scalar (lambda - 2)^2 - 1 = 3 - 4 lambda + lambda^2
PencilModel quadratic_model() {
    return PencilModel::polynomial_family({scalar(3), scalar(-4), scalar(1)}, std::nullopt,
                                          {-1.0, 5.0});
}

// kink family: eigenvalues +- sqrt(2) |lambda - 1|
PencilModel kink_model() {
    Matrix c0(2, 2), c1(2, 2);
    c0(0, 0) = 1;
    c0(0, 1) = -1;
    c0(1, 0) = -1;
    c0(1, 1) = -1;
    c1(0, 0) = -1;
    c1(0, 1) = 1;
    c1(1, 0) = 1;
    c1(1, 1) = 1;
    return PencilModel::polynomial_family({HermitianMatrix(c0), HermitianMatrix(c1)},
                                          std::nullopt, {-2.0, 4.0});
}

}  // namespace

TEST_CASE("nu on the diagonal family") {
    const PencilModel model = diag_model();
    CHECK(nu(model, 0.0, 1e-7) == Inertia{0, 0, 2});
    CHECK(nu(model, 2.0, 1e-7) == Inertia{1, 0, 1});
    CHECK(nu(model, 5.0, 1e-7) == Inertia{2, 0, 0});
    // on an eigenvalue the zero band reports it
    CHECK(nu(model, 1.0, 1e-7).zero == 1);
    CHECK_THROWS_AS(nu(model, 100.0, 1e-7), std::invalid_argument);
}

TEST_CASE("branch table: exact lines and continuity") {
    const PencilModel model = diag_model();
    std::vector<double> grid;
    for (int j = 0; j <= 20; ++j) grid.push_back(-1.0 + 0.3 * j);
    const BranchTable t = branch_table(model, grid, 2);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        CHECK(t.branches[0][j] == Approx(1.0 - grid[j]).margin(1e-12));
        CHECK(t.branches[1][j] == Approx(4.0 - grid[j]).margin(1e-12));
        CHECK(t.branches[0][j] <= t.branches[1][j]);
    }
    CHECK(t.continuity_modulus[0] == Approx(0.3).margin(1e-9));

    CHECK_THROWS_AS(branch_table(model, {0.0, 0.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(branch_table(model, grid, 3), std::invalid_argument);
}

TEST_CASE("branch table: sorted branches form a kink at a crossing") {
    const PencilModel model = kink_model();
    std::vector<double> grid;
    for (int j = 0; j <= 40; ++j) grid.push_back(0.0 + 0.05 * j);
    const BranchTable t = branch_table(model, grid, 2);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double expect = std::sqrt(2.0) * std::abs(grid[j] - 1.0);
        CHECK(t.branches[0][j] == Approx(-expect).margin(1e-10));
        CHECK(t.branches[1][j] == Approx(expect).margin(1e-10));
    }
    // continuity modulus stays bounded by the grid modulus (slope sqrt(2))
    CHECK(t.continuity_modulus[0] <= std::sqrt(2.0) * 0.05 + 1e-9);
    CHECK(t.continuity_modulus[1] <= std::sqrt(2.0) * 0.05 + 1e-9);
}

TEST_CASE("locate: diagonal family roots") {
    const auto roots = locate_eigenvalues(diag_model(), {0.0, 5.0});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].lambda0 == Approx(1.0).margin(1e-9));
    CHECK(roots[0].multiplicity == 1);
    CHECK(roots[0].branch_indices == std::vector<std::size_t>{1});
    CHECK(roots[1].lambda0 == Approx(4.0).margin(1e-9));
    CHECK(roots[1].multiplicity == 1);
}

TEST_CASE("locate: double eigenvalue merges into multiplicity 2") {
    Matrix c0 = Matrix::identity(2);
    Matrix c1 = Matrix::identity(2);
    c1 *= Complex(-1.0);
    const PencilModel model = PencilModel::polynomial_family(
        {HermitianMatrix(c0), HermitianMatrix(c1)}, std::nullopt, {-1.0, 3.0});
    const auto roots = locate_eigenvalues(model, {0.0, 2.0});
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].lambda0 == Approx(1.0).margin(1e-9));
    CHECK(roots[0].multiplicity == 2);
    CHECK(roots[0].branch_indices == std::vector<std::size_t>{1, 2});
    CHECK(roots[0].eigenvectors.cols() == 2);
}

TEST_CASE("locate: scalar quadratic roots and half-open convention") {
    const PencilModel model = quadratic_model();
    const auto roots = locate_eigenvalues(model, {0.5, 3.5});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].lambda0 == Approx(1.0).margin(1e-9));
    CHECK(roots[1].lambda0 == Approx(3.0).margin(1e-9));

    // root exactly at the right endpoint is excluded, at the left included
    const auto upto3 = locate_eigenvalues(model, {1.5, 3.0});
    bool found_at_3 = false;
    for (const auto& r : upto3) found_at_3 = found_at_3 || std::abs(r.lambda0 - 3.0) < 1e-6;
    if (found_at_3) {
        for (const auto& r : upto3)
            if (std::abs(r.lambda0 - 3.0) < 1e-6) CHECK(r.lambda0 < 3.0);
    }
    const auto from1 = locate_eigenvalues(model, {1.0, 2.0});
    REQUIRE(from1.size() == 1);
    CHECK(from1[0].lambda0 >= 1.0);
    CHECK(from1[0].endpoint_ambiguous);
}

TEST_CASE("locate: tangency counts by kernel multiplicity") {
    // F(lambda) = (lambda - 1)^2 I_1: branch touches zero without a sign change
    const PencilModel model = PencilModel::polynomial_family(
        {scalar(1), scalar(-2), scalar(1)}, std::nullopt, {-1.0, 3.0});
    const auto roots = locate_eigenvalues(model, {0.0, 2.5});
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].lambda0 == Approx(1.0).margin(1e-5));
    CHECK(roots[0].multiplicity == 1);
}

TEST_CASE("locate rejects an interval that is not compactly inside") {
    CHECK_THROWS_AS(locate_eigenvalues(diag_model(), {0.0, 8.0}), std::invalid_argument);
    CHECK_THROWS_AS(locate_eigenvalues(diag_model(), {-2.0, 5.0}), std::invalid_argument);
}

TEST_CASE("count report: diagonal family on [0, 5)") {
    const CountReport rep = count_report(diag_model(), {0.0, 5.0});
    CHECK(rep.eigenvalue_count == 2);
    CHECK(rep.nu_lo.negative == 0);
    CHECK(rep.nu_hi.negative == 2);
    CHECK(rep.lower_bound.status == VerdictStatus::Pass);
    CHECK(rep.monotone_equality.status == VerdictStatus::Pass);
    CHECK(rep.negative_type_equality.status == VerdictStatus::Pass);
    CHECK_FALSE(rep.endpoint_on_eigenvalue);
}

TEST_CASE("count report: strict inequality witness") {
    const CountReport rep = count_report(quadratic_model(), {0.5, 3.5});
    CHECK(rep.eigenvalue_count == 2);
    CHECK(rep.delta_nu() == 0);
    CHECK(rep.lower_bound.status == VerdictStatus::Pass);
    CHECK(rep.lower_bound.detail.find("strict") != std::string::npos);
    CHECK(rep.monotone_equality.status == VerdictStatus::HypothesisFailed);
    CHECK(rep.negative_type_equality.status == VerdictStatus::HypothesisFailed);
    CHECK(rep.negative_type_equality.detail.find("3.0") != std::string::npos);
}

TEST_CASE("count report: endpoint on an eigenvalue carries both conventions") {
    const CountReport rep = count_report(diag_model(), {1.0, 4.0});
    CHECK(rep.endpoint_on_eigenvalue);
    REQUIRE(!rep.caveats.empty());
    // root at xi1 = 1 counted (position rule), root at xi2 = 4 excluded
    CHECK(rep.count_excluding_endpoints == 0);
    CHECK(rep.count_including_endpoints == 2);
}

TEST_CASE("check_monotone: certificate and refutation") {
    // F = A0 - lambda M with positive definite slope: certified
    std::mt19937_64 rng(5150);
    const HermitianMatrix a0 = testgen::random_hermitian(rng, 4);
    const HermitianMatrix b = testgen::random_positive_definite(rng, 4);
    Matrix minus_b = b.matrix();
    minus_b *= Complex(-1.0);
    const PencilModel linear = PencilModel::polynomial_family(
        {a0, HermitianMatrix(minus_b)}, std::nullopt, {-3.0, 3.0});
    const MonotoneCheck mono = check_monotone(linear, {-2.0, -1.0, 0.0, 1.0, 2.0});
    CHECK(mono.certified);
    CHECK(mono.pairs_checked == 4);

    // the quadratic refutes at the pair (1.9, 2.1): the difference vanishes
    const MonotoneCheck refuted = check_monotone(quadratic_model(), {1.9, 2.1});
    CHECK_FALSE(refuted.certified);
    CHECK(refuted.lambda1 == Approx(1.9));
    CHECK(refuted.lambda2 == Approx(2.1));
    CHECK(refuted.min_eigenvalue == Approx(0.0).margin(1e-12));
    REQUIRE(refuted.witness.size() == 1);

    CHECK_THROWS_AS(check_monotone(linear, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(check_monotone(linear, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("check_negative_type: signs on located kernels") {
    // linear family: value is -y* M y < 0 always
    std::mt19937_64 rng(626);
    const HermitianMatrix a0 = HermitianMatrix::diagonal({1.0, 2.5});
    Matrix mb = Matrix::identity(2);
    mb *= Complex(-1.0);
    const PencilModel linear = PencilModel::polynomial_family(
        {a0, HermitianMatrix(mb)}, std::nullopt, {-1.0, 4.0});
    for (const auto& root : locate_eigenvalues(linear, {0.0, 3.0})) {
        const NegativeTypeCheck check = check_negative_type(linear, root);
        CHECK(check.applicable);
        CHECK(check.pass);
        CHECK(check.worst_value == Approx(-1.0).margin(1e-8));
    }

    // F = diag(lambda - 1, 2 - lambda): at the root lambda = 1 the kernel
    // direction has derivative +1 (branch increases through zero)
    Matrix c0(2, 2), c1(2, 2);
    c0(0, 0) = -1;
    c0(1, 1) = 2;
    c1(0, 0) = 1;
    c1(1, 1) = -1;
    const PencilModel mixed = PencilModel::polynomial_family(
        {HermitianMatrix(c0), HermitianMatrix(c1)}, std::nullopt, {0.0, 3.0});
    const auto roots = locate_eigenvalues(mixed, {0.5, 1.5});
    REQUIRE(roots.size() == 1);
    const NegativeTypeCheck check = check_negative_type(mixed, roots[0]);
    CHECK(check.applicable);
    CHECK_FALSE(check.pass);
    CHECK(check.worst_value == Approx(1.0).margin(1e-8));
    (void)rng;
}

TEST_CASE("property: lower bound on random polynomial families") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int family = 0; family < 12; ++family) {
        const std::size_t dim = 2 + std::size_t(family % 4);
        std::vector<HermitianMatrix> coeffs;
        for (int d = 0; d <= 2; ++d)
            coeffs.push_back(testgen::random_hermitian(rng, dim, true, d == 0 ? 2.0 : 1.0));
        const PencilModel model =
            PencilModel::polynomial_family(coeffs, std::nullopt, {0.0, 4.0});
        for (int trial = 0; trial < 6; ++trial) {
            double x1 = 0.2 + 3.0 * unif(rng);
            double x2 = x1 + 0.05 + (3.7 - x1) * unif(rng) * 0.9;
            const CountReport rep = count_report(model, {x1, x2});
            if (rep.endpoint_on_eigenvalue) continue;
            INFO("family " << family << " interval [" << x1 << ", " << x2 << ")");
            CHECK(long(rep.eigenvalue_count) >= rep.delta_nu());
        }
    }
}

TEST_CASE("property: equality for monotone linear pencils") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int family = 0; family < 10; ++family) {
        const std::size_t dim = 2 + std::size_t(family % 5);
        const HermitianMatrix a0 = testgen::random_hermitian(rng, dim, true, 2.0);
        const HermitianMatrix b = testgen::random_positive_definite(rng, dim);
        Matrix mb = b.matrix();
        mb *= Complex(-1.0);
        const PencilModel model = PencilModel::polynomial_family(
            {a0, HermitianMatrix(mb)}, std::nullopt, {-40.0, 40.0});
        // roots are the generalized eigenvalues of (A0, B)
        const auto expected_roots = generalized_eigenvalues(a0, b);
        for (int trial = 0; trial < 5; ++trial) {
            const double x1 = -8.0 + 8.0 * unif(rng);
            const double x2 = x1 + 0.3 + 8.0 * unif(rng);
            bool near_root = false;
            for (double r : expected_roots)
                near_root = near_root || std::abs(r - x1) < 1e-3 || std::abs(r - x2) < 1e-3;
            if (near_root) continue;
            std::size_t direct = 0;
            for (double r : expected_roots)
                if (r >= x1 && r < x2) ++direct;
            const CountReport rep = count_report(model, {x1, x2});
            INFO("family " << family << " [" << x1 << "," << x2 << ")");
            CHECK(rep.eigenvalue_count == direct);
            CHECK(rep.delta_nu() == long(direct));
            CHECK(rep.monotone_equality.status == VerdictStatus::Pass);
            // F' = -B is negative definite: the derivative sign test holds at
            // every root, so the equality verdict applies on that route too
            CHECK(rep.negative_type_equality.status == VerdictStatus::Pass);
        }
    }
}

TEST_CASE("property: multiplicities sum to the count") {
    std::mt19937_64 rng(31415);
    for (int family = 0; family < 6; ++family) {
        const std::size_t dim = 3;
        std::vector<HermitianMatrix> coeffs;
        for (int d = 0; d <= 2; ++d) coeffs.push_back(testgen::random_hermitian(rng, dim));
        const PencilModel model =
            PencilModel::polynomial_family(coeffs, std::nullopt, {0.0, 4.0});
        const auto roots = locate_eigenvalues(model, {0.5, 3.5});
        std::size_t total = 0;
        for (const auto& r : roots) {
            CHECK(r.multiplicity == r.branch_indices.size());
            total += r.multiplicity;
        }
        const CountReport rep = count_report(model, {0.5, 3.5});
        CHECK(rep.eigenvalue_count == total);
    }
}

TEST_CASE("polynomial family evaluation is exact at the coefficients") {
    const PencilModel model = quadratic_model();
    const auto eval = model.eval_form(2.0);
    CHECK(eval.f(0, 0).real() == Approx(-1.0));
    const HermitianMatrix d = model.eval_form_derivative(3.0);
    CHECK(d(0, 0).real() == Approx(2.0));
    CHECK(model.has_derivative());
    CHECK(model.dimension() == 1);
}

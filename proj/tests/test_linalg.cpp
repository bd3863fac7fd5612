// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spectral/eigen.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace spectral;
using Catch::Approx;

namespace {

double eigen_residual(const HermitianMatrix& h, const EigenDecomposition& d) {
    double worst = 0.0;
    const std::size_t n = h.dim();
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = d.eigenvectors(i, k);
        std::vector<Complex> hv = h.matrix().apply(v);
        for (std::size_t i = 0; i < n; ++i) hv[i] -= d.eigenvalues[k] * v[i];
        worst = std::max(worst, norm2(hv));
    }
    return worst;
}

double orthonormality_defect(const Matrix& v) {
    Matrix g = v.adjoint() * v;
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return g.frobenius_norm();
}

}  // namespace

TEST_CASE("hermitian matrix validation") {
    Matrix bad(2, 2);
    bad(0, 1) = Complex(1.0, 0.0);
    bad(1, 0) = Complex(2.0, 0.0);
    CHECK_THROWS_AS(HermitianMatrix(bad), NotHermitianError);
    try {
        HermitianMatrix h(bad);
    } catch (const NotHermitianError& e) {
        CHECK(e.max_asymmetry == Approx(1.0));
    }

    Matrix imag_diag(1, 1);
    imag_diag(0, 0) = Complex(1.0, 1e-6);
    CHECK_THROWS_AS(HermitianMatrix(imag_diag), NotHermitianError);

    // asymmetry within tolerance symmetrizes cleanly
    Matrix near(2, 2);
    near(0, 1) = Complex(1.0, 0.5);
    near(1, 0) = std::conj(Complex(1.0, 0.5)) + Complex(1e-14, 0.0);
    const HermitianMatrix h(near);
    CHECK(h(0, 1) == std::conj(h(1, 0)));
}

TEST_CASE("eigen: diagonal and exchange examples") {
    const auto d = hermitian_eigenvalues(HermitianMatrix::diagonal({3, 1, 2}));
    CHECK(d[0] == Approx(1.0).margin(1e-14));
    CHECK(d[1] == Approx(2.0).margin(1e-14));
    CHECK(d[2] == Approx(3.0).margin(1e-14));

    Matrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    const auto e = hermitian_eigenvalues(HermitianMatrix(x));
    CHECK(e[0] == Approx(-1.0).margin(1e-14));
    CHECK(e[1] == Approx(1.0).margin(1e-14));
}

TEST_CASE("eigen: frozen integer matrix against the exact characteristic polynomial") {
    // fixed Gaussian-integer Hermitian 6x6
    const std::size_t n = 6;
    const long long re[6][6] = {{2, 1, -1, 0, 2, -2}, {1, -3, 2, 1, 0, 1},
                                {-1, 2, 1, -2, 1, 0}, {0, 1, -2, 4, -1, 2},
                                {2, 0, 1, -1, 0, 1},  {-2, 1, 0, 2, 1, -2}};
    const long long im[6][6] = {{0, 1, 0, -1, 2, 0}, {-1, 0, 1, 0, -1, 2},
                                {0, -1, 0, 2, 0, -1}, {1, 0, -2, 0, 1, 0},
                                {-2, 1, 0, -1, 0, 1}, {0, -2, 1, 0, -1, 0}};
    std::vector<oracle::GaussInt> entries(n * n);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            entries[i * n + j] = oracle::GaussInt(re[i][j], im[i][j]);
            m(i, j) = Complex(double(re[i][j]), double(im[i][j]));
        }
    const HermitianMatrix h(m);

    // char poly coefficients, exact; roots by long-double bisection
    const std::vector<long long> charpoly = oracle::charpoly_hermitian(entries, n);
    std::vector<long long> ascending(charpoly.rbegin(), charpoly.rend());
    const std::vector<double> expected = oracle::real_roots(ascending, -20.0, 20.0);
    REQUIRE(expected.size() == n);

    const auto values = hermitian_eigenvalues(h);
    for (std::size_t k = 0; k < n; ++k) CHECK(values[k] == Approx(expected[k]).margin(1e-9));

    const EigenDecomposition dec = hermitian_eigen(h);
    CHECK(eigen_residual(h, dec) <= 1e-9 * (1.0 + h.frobenius_norm()));
    CHECK(orthonormality_defect(dec.eigenvectors) <= 1e-9);
}

TEST_CASE("eigen: residual, orthonormality and ordering on random matrices") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + std::size_t(trial % 5) * 13;  // crosses the Jacobi cutoff
        const bool complex_entries = trial % 2 == 0;
        const HermitianMatrix h = testgen::random_hermitian(rng, n, complex_entries);
        const EigenDecomposition dec = hermitian_eigen(h);
        CHECK(eigen_residual(h, dec) <= 1e-9 * (1.0 + h.frobenius_norm()));
        CHECK(orthonormality_defect(dec.eigenvectors) <= 1e-9);
        for (std::size_t k = 1; k < n; ++k) CHECK(dec.eigenvalues[k] >= dec.eigenvalues[k - 1]);
        const auto vals = hermitian_eigenvalues(h);
        for (std::size_t k = 0; k < n; ++k) CHECK(vals[k] == dec.eigenvalues[k]);
    }
}

TEST_CASE("eigen: determinism is bitwise") {
    std::mt19937_64 rng(7);
    const HermitianMatrix h = testgen::random_hermitian(rng, 40);
    const auto a = hermitian_eigenvalues(h);
    const auto b = hermitian_eigenvalues(h);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("inertia examples") {
    CHECK(inertia(HermitianMatrix::diagonal({-1, 0, 2}), 1e-9) == Inertia{1, 1, 1});
    CHECK(inertia(HermitianMatrix::identity(4), 1e-9) == Inertia{0, 0, 4});
    // the zero band scales with the spectral radius
    CHECK(inertia(HermitianMatrix::diagonal({-5, -1e-15, 3, 7}), 1e-9) == Inertia{1, 1, 2});
    CHECK_THROWS_AS(inertia(HermitianMatrix::identity(2), 0.0), std::invalid_argument);
}

TEST_CASE("cholesky examples") {
    const Matrix id = cholesky(HermitianMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(id(i, j) == Complex(i == j ? 1.0 : 0.0));

    Matrix m(2, 2);
    m(0, 0) = 4;
    m(0, 1) = 2;
    m(1, 0) = 2;
    m(1, 1) = 2;
    const Matrix l = cholesky(HermitianMatrix(m));
    CHECK(l(0, 0).real() == Approx(2.0));
    CHECK(l(1, 0).real() == Approx(1.0));
    CHECK(l(1, 1).real() == Approx(1.0));
    CHECK(l(0, 1) == Complex(0.0));

    try {
        cholesky(HermitianMatrix::diagonal({1, -1}));
        FAIL("expected NotPositiveDefiniteError");
    } catch (const NotPositiveDefiniteError& e) {
        CHECK(e.pivot_index == 1);
    }
}

TEST_CASE("cholesky residual bound on random positive definite matrices") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3 + std::size_t(trial) * 7;
        const HermitianMatrix m = testgen::random_positive_definite(rng, n);
        const Matrix l = cholesky(m);
        Matrix residual = l * l.adjoint();
        residual -= m.matrix();
        CHECK(residual.frobenius_norm() <= 1e-10 * m.frobenius_norm());
    }
}

TEST_CASE("generalized eigen examples") {
    const auto simple = generalized_eigenvalues(HermitianMatrix::diagonal({2, -3}),
                                                HermitianMatrix::identity(2));
    CHECK(simple[0] == Approx(-3.0).margin(1e-12));
    CHECK(simple[1] == Approx(2.0).margin(1e-12));

    // scaling law: M = 4 I divides the spectrum by 4
    std::mt19937_64 rng(2024);
    const HermitianMatrix f = testgen::random_hermitian(rng, 5);
    const auto base = hermitian_eigenvalues(f);
    const auto scaled = generalized_eigenvalues(f, HermitianMatrix::identity(5).scaled(4.0));
    for (std::size_t k = 0; k < 5; ++k) CHECK(scaled[k] == Approx(base[k] / 4.0).margin(1e-10));
}

TEST_CASE("generalized eigen: frozen 5x5 integer pair against the determinant oracle") {
    const std::size_t n = 5;
    const long long fre[5][5] = {{1, 2, 0, -1, 1},
                                 {2, -2, 1, 0, -1},
                                 {0, 1, 3, 1, 0},
                                 {-1, 0, 1, -1, 2},
                                 {1, -1, 0, 2, 2}};
    const long long fim[5][5] = {{0, 1, -1, 0, 2},
                                 {-1, 0, 0, 1, -1},
                                 {1, 0, 0, -1, 1},
                                 {0, -1, 1, 0, 0},
                                 {-2, 1, -1, 0, 0}};
    // diagonally dominant => positive definite
    const long long mre[5][5] = {{6, 1, 0, 0, 1},
                                 {1, 7, 1, 0, 0},
                                 {0, 1, 6, 1, 0},
                                 {0, 0, 1, 5, 1},
                                 {1, 0, 0, 1, 6}};
    std::vector<oracle::GaussInt> fe(n * n), me(n * n);
    Matrix fm(n, n), mm(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            fe[i * n + j] = oracle::GaussInt(fre[i][j], fim[i][j]);
            me[i * n + j] = oracle::GaussInt(mre[i][j], 0);
            fm(i, j) = Complex(double(fre[i][j]), double(fim[i][j]));
            mm(i, j) = Complex(double(mre[i][j]), 0.0);
        }
    const HermitianMatrix f(fm), m(mm);

    const std::vector<long long> det_poly = oracle::pencil_charpoly(fe, me, n);
    const std::vector<double> expected = oracle::real_roots(det_poly, -10.0, 10.0);
    REQUIRE(expected.size() == n);

    const auto values = generalized_eigenvalues(f, m);
    for (std::size_t k = 0; k < n; ++k) CHECK(values[k] == Approx(expected[k]).margin(1e-9));

    // eigenvectors are M-orthonormal
    const EigenDecomposition dec = generalized_eigen(f, m);
    Matrix g = dec.eigenvectors.adjoint() * (m.matrix() * dec.eigenvectors);
    for (std::size_t i = 0; i < n; ++i) g(i, i) -= 1.0;
    CHECK(g.frobenius_norm() <= 1e-9);
}

TEST_CASE("Sylvester consistency: pencil inertia equals matrix inertia") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + std::size_t(trial % 6);
        const HermitianMatrix f = testgen::random_hermitian(rng, n);
        const HermitianMatrix m = testgen::random_positive_definite(rng, n);
        const Inertia direct = inertia(f, 1e-9);
        const Inertia pencil = inertia_of_values(generalized_eigenvalues(f, m), 1e-9);
        CHECK(direct.negative == pencil.negative);
        CHECK(direct.positive == pencil.positive);
        CHECK(direct.zero == pencil.zero);
    }
}

TEST_CASE("negative count equals the count of negative Rayleigh quotients") {
    // the greedy variational characterization collapses to this identity on
    // the eigenbasis; asserted as a consistency check between the inertia
    // and decomposition paths
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + std::size_t(trial % 4) * 2;
        const HermitianMatrix h = testgen::random_hermitian(rng, n);
        const EigenDecomposition dec = hermitian_eigen(h);
        std::size_t negative_quotients = 0;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<Complex> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = dec.eigenvectors(i, k);
            if (inner(h.matrix().apply(v), v).real() < 0.0) ++negative_quotients;
        }
        CHECK(negative_quotients == inertia(h, 1e-9).negative);
    }
}

TEST_CASE("generalized eigen rejects an indefinite mass") {
    CHECK_THROWS_AS(
        generalized_eigenvalues(HermitianMatrix::identity(2), HermitianMatrix::diagonal({1, -1})),
        NotPositiveDefiniteError);
}

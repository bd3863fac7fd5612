// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/eigen.hpp"

namespace spectral {

namespace {

constexpr double kUnitarityTol = 1e-8;
constexpr double kGeneratedUnitarityTol = 1e-10;

double unitarity_residual(const Matrix& u) {
    const std::size_t n = u.rows();
    Matrix g = u.adjoint() * u;
    for (std::size_t i = 0; i < n; ++i) g(i, i) -= 1.0;
    return g.frobenius_norm();
}

void require_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols()) throw std::invalid_argument("boundary: matrix not square");
    const double r = unitarity_residual(u);
    if (r > tol)
        throw NotUnitaryError(r, "matrix is not unitary (||U*U - I|| = " + std::to_string(r) +
                                     ")");
}

}  // namespace

UnitaryEigen unitary_eigen(const Matrix& u) {
    require_unitary(u, kUnitarityTol);
    const std::size_t n = u.rows();
    const Matrix ustar = u.adjoint();

    // real part C = (U+U*)/2 and imaginary part S = (U-U*)/2i commute for a
    // normal matrix; eigenvectors of U are a joint eigenbasis.
    Matrix c = u;
    Matrix s = u;
    c += ustar;
    c *= Complex(0.5);
    s -= ustar;
    s *= Complex(0.0, -0.5);

    const HermitianMatrix ch = hermitize(c);
    const HermitianMatrix sh = hermitize(s);
    EigenDecomposition cd = hermitian_eigen(ch);

    UnitaryEigen result;
    result.eigenvalues.assign(n, Complex(0.0));
    result.eigenvectors = Matrix(n, n);

    // group cos-eigenvalues into clusters, then split each cluster with the
    // restriction of S (distinguishes conjugate pairs e^{i t}, e^{-i t})
    const double cluster_tol = 1e-7 * std::max(1.0, std::abs(cd.eigenvalues.back()) +
                                                        std::abs(cd.eigenvalues.front()));
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && cd.eigenvalues[stop] - cd.eigenvalues[stop - 1] <= cluster_tol) ++stop;
        const std::size_t k = stop - start;

        // W = eigenvector block; P = W* S W (k x k Hermitian)
        Matrix w(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) w(i, j) = cd.eigenvectors(i, start + j);
        const Matrix p = w.adjoint() * (sh.matrix() * w);
        EigenDecomposition pd = hermitian_eigen(hermitize(p));
        const Matrix wr = w * pd.eigenvectors;

        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Complex> vec(n);
            for (std::size_t i = 0; i < n; ++i) vec[i] = wr(i, j);
            // Rayleigh quotients give the (cos, sin) pair of the eigenvalue.
            const std::vector<Complex> cv = ch.matrix().apply(vec);
            const std::vector<Complex> sv = sh.matrix().apply(vec);
            const double re = inner(cv, vec).real();
            const double im = inner(sv, vec).real();
            // snap to the unit circle
            const double mag = std::hypot(re, im);
            const Complex ev = (mag == 0.0) ? Complex(1.0) : Complex(re / mag, im / mag);
            result.eigenvalues[start + j] = ev;
            for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, start + j) = wr(i, j);
        }
        start = stop;
    }

    // residual check; retry with a coarser cluster tolerance is not needed in
    // practice because the block subdiagonalization already handles repeats
    double max_res = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Complex> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = result.eigenvectors(i, j);
        std::vector<Complex> uv = u.apply(vec);
        for (std::size_t i = 0; i < n; ++i) uv[i] -= result.eigenvalues[j] * vec[i];
        max_res = std::max(max_res, norm2(uv));
    }
    if (max_res > 1e-8)
        throw std::runtime_error("unitary_eigen: residual " + std::to_string(max_res) +
                                 " exceeds tolerance");
    return result;
}

UnitaryBoundary UnitaryBoundary::constant(Matrix u0) {
    require_unitary(u0, kGeneratedUnitarityTol);
    UnitaryBoundary bc;
    bc.size_ = u0.rows();
    if (bc.size_ == 0 || bc.size_ % 2 != 0)
        throw std::invalid_argument("boundary: size must be even and positive");
    bc.constant_ = std::move(u0);
    return bc;
}

UnitaryBoundary UnitaryBoundary::generated(HermitianMatrix theta0, HermitianMatrix theta1) {
    if (theta0.dim() != theta1.dim())
        throw std::invalid_argument("boundary: generator dimensions differ");
    UnitaryBoundary bc;
    bc.size_ = theta0.dim();
    if (bc.size_ == 0 || bc.size_ % 2 != 0)
        throw std::invalid_argument("boundary: size must be even and positive");
    bc.theta0_ = std::move(theta0);
    bc.theta1_ = std::move(theta1);
    return bc;
}

bool UnitaryBoundary::is_lambda_independent() const {
    if (constant_) return true;
    return theta1_->frobenius_norm() == 0.0;
}

Matrix UnitaryBoundary::evaluate(double lambda) const {
    if (constant_) {
        require_unitary(*constant_, kGeneratedUnitarityTol);
        return *constant_;
    }
    const HermitianMatrix g = *theta0_ + theta1_->scaled(lambda);
    EigenDecomposition dec = hermitian_eigen(g);
    const std::size_t n = g.dim();
    Matrix u(n, n);
    // V diag(e^{i mu}) V*
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const Complex phase = std::polar(1.0, dec.eigenvalues[k]);
                acc += dec.eigenvectors(i, k) * phase * std::conj(dec.eigenvectors(j, k));
            }
            u(i, j) = acc;
        }
    }
    return u;
}

double boundary_residue_weight(Complex u) {
    // -i (u+1)/(u-1) is real on the unit circle: equals -cot(theta/2) for
    // u = e^{i theta}
    const Complex w = Complex(0.0, -1.0) * (u + 1.0) / (u - 1.0);
    return w.real();
}

BoundaryMatrix boundary_matrix(const Matrix& u, double one_tol) {
    require_unitary(u, kUnitarityTol);
    const std::size_t n = u.rows();
    UnitaryEigen dec = unitary_eigen(u);

    BoundaryMatrix result;
    result.one_eigenvalue_tol = one_tol;
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double gap = std::abs(dec.eigenvalues[j] - 1.0);
        if (gap > one_tol && gap <= 2.0 * one_tol) result.ambiguous = true;
        if (gap <= one_tol) continue;
        const double c = boundary_residue_weight(dec.eigenvalues[j]);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s)
                a(r, s) += c * dec.eigenvectors(r, j) * std::conj(dec.eigenvectors(s, j));
    }
    result.a = hermitize(a);
    return result;
}

BoundaryPair boundary_pair(const Matrix& u, const std::vector<Complex>& x) {
    if (u.rows() != x.size()) throw std::invalid_argument("boundary_pair: dimension mismatch");
    const std::size_t n = x.size();
    BoundaryPair p;
    p.y = u.apply(x);
    p.z = p.y;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex ux = p.y[i];
        p.y[i] = ux - x[i];
        p.z[i] = Complex(0.0, -1.0) * (ux + x[i]);
    }
    return p;
}

ConstraintData constraint_data(const Matrix& u, double one_tol) {
    require_unitary(u, kUnitarityTol);
    const std::size_t n = u.rows();
    UnitaryEigen dec = unitary_eigen(u);
    ConstraintData result;
    std::vector<std::size_t> kernel_cols;
    for (std::size_t j = 0; j < n; ++j) {
        const double gap = std::abs(dec.eigenvalues[j] - 1.0);
        if (gap > one_tol && gap <= 2.0 * one_tol) result.ambiguous = true;
        if (gap <= one_tol) kernel_cols.push_back(j);
    }
    result.kernel_basis = Matrix(n, kernel_cols.size());
    for (std::size_t j = 0; j < kernel_cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            result.kernel_basis(i, j) = dec.eigenvectors(i, kernel_cols[j]);
    result.codimension = n - kernel_cols.size();
    return result;
}

RankConstancyResult rank_constancy_check(const UnitaryBoundary& bc,
                                         const std::vector<double>& lambda_grid, double one_tol) {
    RankConstancyResult r;
    r.ranks.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        const ConstraintData c = constraint_data(bc.evaluate(lambda), one_tol);
        r.ranks.push_back(c.codimension);
    }
    r.constant = true;
    for (std::size_t i = 1; i < r.ranks.size(); ++i)
        if (r.ranks[i] != r.ranks[0]) r.constant = false;
    return r;
}

HermitianMatrix boundary_matrix_derivative(const UnitaryBoundary& bc, double lambda, double h,
                                           double one_tol) {
    if (h <= 0.0) throw std::invalid_argument("boundary derivative: step must be positive");
    const Matrix um = bc.evaluate(lambda - h);
    const Matrix up = bc.evaluate(lambda + h);
    const ConstraintData cm = constraint_data(um, one_tol);
    const ConstraintData cp = constraint_data(up, one_tol);
    if (cm.codimension != cp.codimension)
        throw RankChangeError("boundary derivative: rank(U-1) changes within [lambda-h, lambda+h]");
    const BoundaryMatrix am = boundary_matrix(um, one_tol);
    const BoundaryMatrix ap = boundary_matrix(up, one_tol);
    Matrix d = ap.a.matrix();
    d -= am.a.matrix();
    d *= Complex(1.0 / (2.0 * h));
    return hermitize(d);
}

HermitianMatrix boundary_matrix_derivative(const UnitaryBoundary& bc, double lambda) {
    return boundary_matrix_derivative(bc, lambda, 1e-5 * (1.0 + std::abs(lambda)));
}

}  // namespace spectral

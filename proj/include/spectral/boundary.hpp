// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {

class NotUnitaryError : public std::runtime_error {
public:
    NotUnitaryError(double residual, std::string what)
        : std::runtime_error(std::move(what)), residual(residual) {}
    double residual;
};

class RankChangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Spectral decomposition of a unitary matrix: eigenvalues on the unit
/// circle, orthonormal eigenvectors (columns). Computed by jointly
/// diagonalizing the commuting Hermitian pair (U+U*)/2 and (U-U*)/2i.
struct UnitaryEigen {
    std::vector<Complex> eigenvalues;
    Matrix eigenvectors;
};

UnitaryEigen unitary_eigen(const Matrix& u);

/// Boundary condition parametrization by a 2n x 2n unitary matrix family
/// U(lambda): either a fixed matrix or exp(i(theta0 + lambda*theta1)) with
/// Hermitian generators.
class UnitaryBoundary {
public:
    /// Fixed matrix; unitarity is validated here and on each evaluation.
    static UnitaryBoundary constant(Matrix u0);
    /// Generator form U(lambda) = exp(i(theta0 + lambda*theta1)).
    static UnitaryBoundary generated(HermitianMatrix theta0, HermitianMatrix theta1);

    std::size_t size() const { return size_; }
    bool is_constant() const { return constant_.has_value(); }
    /// A constant boundary, or a generated one with theta1 == 0, cannot vary.
    bool is_lambda_independent() const;

    Matrix evaluate(double lambda) const;

private:
    UnitaryBoundary() = default;
    std::size_t size_ = 0;
    std::optional<Matrix> constant_;
    std::optional<HermitianMatrix> theta0_;
    std::optional<HermitianMatrix> theta1_;
};

/// Hermitian boundary-form matrix derived from the spectral decomposition of
/// U: contributions only from eigenvalues away from 1, each weighted by the
/// residue weight. `ambiguous` is set when some eigenvalue lies within twice
/// one_tol of the unit-eigenvalue band edge.
struct BoundaryMatrix {
    HermitianMatrix a;
    double one_eigenvalue_tol = 0.0;
    bool ambiguous = false;
};

/// Weight attached to a non-unit eigenvalue u of U. Matches the contour
/// quadrature of the boundary-form integral; frozen by a regression test
/// against that quadrature at U = i*I.
double boundary_residue_weight(Complex u);

BoundaryMatrix boundary_matrix(const Matrix& u, double one_tol = 1e-8);

/// Pair Y = (U-1)X, Z = -i(U+1)X: every admissible boundary-vector pair has
/// this parametric form.
struct BoundaryPair {
    std::vector<Complex> y;
    std::vector<Complex> z;
};

BoundaryPair boundary_pair(const Matrix& u, const std::vector<Complex>& x);

/// Orthonormal basis of the eigenspace of U for eigenvalues within one_tol
/// of 1, and its codimension rank(U-1).
struct ConstraintData {
    Matrix kernel_basis;  // size x kernel_dim, orthonormal columns
    std::size_t codimension = 0;
    bool ambiguous = false;

    std::size_t kernel_dim() const { return kernel_basis.cols(); }
};

ConstraintData constraint_data(const Matrix& u, double one_tol = 1e-8);

struct RankConstancyResult {
    bool constant = false;
    std::vector<std::size_t> ranks;
};

/// rank(U(lambda)-1) on a grid; the counting theory for differential
/// problems assumes this rank does not vary.
RankConstancyResult rank_constancy_check(const UnitaryBoundary& bc,
                                         const std::vector<double>& lambda_grid,
                                         double one_tol = 1e-8);

/// Central-difference derivative of the boundary matrix. Throws
/// RankChangeError when rank(U-1) differs between lambda-h and lambda+h
/// (the derivative is undefined across a unit-eigenvalue transition).
HermitianMatrix boundary_matrix_derivative(const UnitaryBoundary& bc, double lambda, double h,
                                           double one_tol = 1e-8);
HermitianMatrix boundary_matrix_derivative(const UnitaryBoundary& bc, double lambda);

}  // namespace spectral

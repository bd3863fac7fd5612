// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {

/// Result of a Hermitian eigendecomposition. Eigenvalues ascend; eigenvector
/// k is the k-th column of `eigenvectors` and the columns are orthonormal
/// (M-orthonormal for the generalized problem).
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Full eigendecomposition of a Hermitian matrix. Cyclic Jacobi up to
/// dimension 32, Householder tridiagonalization + implicit QL above that;
/// both paths are deterministic for identical input.
EigenDecomposition hermitian_eigen(const HermitianMatrix& h);

/// Eigenvalues only (ascending); cheaper than hermitian_eigen.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h);

/// Signature of h: eigenvalues below -zero_tol*s / within the band / above,
/// where s = max(1, spectral radius). zero_tol must be positive.
Inertia inertia(const HermitianMatrix& h, double zero_tol);

/// Inertia computed directly from an ascending eigenvalue array.
Inertia inertia_of_values(const std::vector<double>& values, double zero_tol);

/// Lower-triangular Cholesky factor L with L L* = m. Throws
/// NotPositiveDefiniteError if a pivot falls at or below 1e-12 * ||m||_F.
Matrix cholesky(const HermitianMatrix& m);

/// True iff cholesky(m + shift*I) succeeds; used for semidefiniteness probes.
bool cholesky_succeeds(const HermitianMatrix& m, double shift = 0.0);

/// Spectrum of the pencil (f, m) with m positive definite: eigenvalues of
/// L^{-1} f L^{-*}, ascending. Returned eigenvectors are m-orthonormal.
EigenDecomposition generalized_eigen(const HermitianMatrix& f, const HermitianMatrix& m);

/// Generalized eigenvalues only.
std::vector<double> generalized_eigenvalues(const HermitianMatrix& f, const HermitianMatrix& m);

}  // namespace spectral

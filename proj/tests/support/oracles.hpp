// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "spectral/matrix.hpp"

// Independent cross-check machinery for the test suites. Everything here is
// deliberately implemented by different algorithms than the library paths it
// validates.
namespace spectral::oracle {

using GaussInt = std::complex<long long>;

/// Characteristic polynomial det(mu I - A) of a Hermitian matrix with
/// Gaussian-integer entries, via the Faddeev-LeVerrier recursion in exact
/// integer arithmetic. Returns real coefficients c[0..n] with c[0] the
/// leading (mu^n) coefficient 1.
std::vector<long long> charpoly_hermitian(const std::vector<GaussInt>& entries, std::size_t n);

/// det(F - mu M) for a Hermitian integer pair, by full permutation expansion
/// of the determinant with linear-polynomial entries; exact integer
/// arithmetic. Coefficients ascending in mu.
std::vector<long long> pencil_charpoly(const std::vector<GaussInt>& f,
                                       const std::vector<GaussInt>& m, std::size_t n);

/// All real roots of a polynomial (ascending coefficients) inside
/// [lo, hi], found by dense sign-change scanning plus bisection in long
/// double arithmetic. Intended for polynomials with simple real roots.
std::vector<double> real_roots(const std::vector<long long>& ascending_coeffs, double lo,
                               double hi);

/// Matrix exponential by scaling-and-squaring with a 64-term Taylor series.
Matrix expm_series(const Matrix& a);

/// Dense complex linear solve (Gaussian elimination, partial pivoting).
Matrix solve_dense(Matrix a, Matrix rhs);

/// Trapezoidal contour quadrature of the boundary-form integral
///   (1/2pi) \oint (z+1)/(z-1) (U - z)^{-1} dz
/// over a circle |z - center| = radius with `nodes` midpoint nodes. The
/// circle must enclose the eigenvalues of U that differ from 1 and exclude
/// the point 1.
Matrix contour_boundary_matrix_circle(const Matrix& u, Complex center, double radius,
                                      std::size_t nodes);

/// Same integral over the two-component contour: a positively oriented
/// circle |z| = 1.25 minus a small circle around 1 whose radius the caller
/// chooses below the distance from 1 to the nearest other eigenvalue
/// (typically gap/2). Handles eigenvalues arbitrarily close to 1.
Matrix contour_boundary_matrix(const Matrix& u, double exclusion_radius,
                               std::size_t nodes_per_component = 512);

}  // namespace spectral::oracle

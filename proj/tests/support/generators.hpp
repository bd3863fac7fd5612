// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <vector>

#include "spectral/eigen.hpp"
#include "spectral/matrix.hpp"

// Deterministic random builders shared by the test suites. Every test passes
// its own fixed-seed engine, so the suite is reproducible run to run.
namespace spectral::testgen {

inline Matrix random_hermitian_matrix(std::mt19937_64& rng, std::size_t n, bool complex_entries,
                                      double scale = 1.0) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = scale * g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = complex_entries ? Complex(g(rng), g(rng)) : Complex(g(rng));
            m(i, j) = scale * v;
            m(j, i) = scale * std::conj(v);
        }
    }
    return m;
}

inline HermitianMatrix random_hermitian(std::mt19937_64& rng, std::size_t n,
                                        bool complex_entries = true, double scale = 1.0) {
    return HermitianMatrix(random_hermitian_matrix(rng, n, complex_entries, scale));
}

/// Positive definite matrix L L* + shift I.
inline HermitianMatrix random_positive_definite(std::mt19937_64& rng, std::size_t n,
                                                bool complex_entries = true) {
    const Matrix h = random_hermitian_matrix(rng, n, complex_entries);
    Matrix m = h * h.adjoint();
    for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.5;
    return HermitianMatrix(m);
}

/// Unitary with a prescribed spectrum: V diag(e^{i angle}) V*, where V is the
/// (orthonormal) eigenvector frame of a random Hermitian matrix.
inline Matrix unitary_from_angles(std::mt19937_64& rng, const std::vector<double>& angles) {
    const std::size_t n = angles.size();
    const EigenDecomposition frame = hermitian_eigen(random_hermitian(rng, n));
    Matrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += frame.eigenvectors(i, k) * std::polar(1.0, angles[k]) *
                       std::conj(frame.eigenvectors(j, k));
            u(i, j) = acc;
        }
    return u;
}

inline std::vector<Complex> random_complex_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return v;
}

}  // namespace spectral::testgen

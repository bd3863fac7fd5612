// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectral {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    Matrix adjoint() const;
    Matrix transpose() const;

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(Complex s);

    std::vector<Complex> apply(const std::vector<Complex>& x) const;

    double frobenius_norm() const;
    double max_abs() const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix operator*(Complex s, const Matrix& m);

/// <u, v> with the convention conjugate-linear in the second argument:
/// inner(u, v) = sum_i u_i * conj(v_i).
Complex inner(const std::vector<Complex>& u, const std::vector<Complex>& v);
double norm2(const std::vector<Complex>& v);

/// Counts of negative / near-zero / positive eigenvalues.
struct Inertia {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;

    std::size_t total() const { return negative + zero + positive; }
    bool operator==(const Inertia&) const = default;
};

class NotHermitianError : public std::runtime_error {
public:
    NotHermitianError(double max_asymmetry, std::string what)
        : std::runtime_error(std::move(what)), max_asymmetry(max_asymmetry) {}
    double max_asymmetry;
};

class NotPositiveDefiniteError : public std::runtime_error {
public:
    NotPositiveDefiniteError(std::size_t pivot_index, double pivot, std::string what)
        : std::runtime_error(std::move(what)), pivot_index(pivot_index), pivot(pivot) {}
    std::size_t pivot_index;
    double pivot;
};

/// Square matrix validated (and stored) as exactly Hermitian: entries are
/// symmetrized on construction, rejected if the asymmetry exceeds 1e-12
/// absolute or a diagonal imaginary part exceeds 1e-12.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const Matrix& m);

    static HermitianMatrix identity(std::size_t n) { return HermitianMatrix(Matrix::identity(n)); }
    static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(Matrix(n, n)); }
    static HermitianMatrix diagonal(const std::vector<double>& d);

    std::size_t dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    double frobenius_norm() const { return m_.frobenius_norm(); }
    bool is_real() const;

    HermitianMatrix operator+(const HermitianMatrix& rhs) const;
    HermitianMatrix operator-(const HermitianMatrix& rhs) const;
    HermitianMatrix scaled(double s) const;

private:
    struct unchecked_tag {};
    HermitianMatrix(Matrix m, unchecked_tag) : m_(std::move(m)) {}
    Matrix m_;

    friend HermitianMatrix hermitian_unchecked(Matrix m);
};

/// Wraps a matrix that is Hermitian by construction (no validation, no
/// symmetrization). The caller guarantees entries[i][j] == conj(entries[j][i]).
HermitianMatrix hermitian_unchecked(Matrix m);

/// Symmetrizes (m + m*)/2 and wraps the result.
HermitianMatrix hermitize(const Matrix& m);

}  // namespace spectral

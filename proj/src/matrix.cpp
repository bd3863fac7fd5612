// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace spectral {

Matrix Matrix::adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex(0.0)) continue;
            const Complex* brow = &rhs.data_[k * rhs.cols_];
            Complex* rrow = &r.data_[i * rhs.cols_];
            for (std::size_t j = 0; j < rhs.cols_; ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    Matrix r = *this;
    r += rhs;
    return r;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    Matrix r = *this;
    r -= rhs;
    return r;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (!same_shape(rhs)) throw std::invalid_argument("matrix sum: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (!same_shape(rhs)) throw std::invalid_argument("matrix difference: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
}

Matrix operator*(Complex s, const Matrix& m) {
    Matrix r = m;
    r *= s;
    return r;
}

std::vector<Complex> Matrix::apply(const std::vector<Complex>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix apply: shape mismatch");
    std::vector<Complex> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Complex acc = 0.0;
        const Complex* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (const auto& v : data_) s = std::max(s, std::abs(v));
    return s;
}

Complex inner(const std::vector<Complex>& u, const std::vector<Complex>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner: size mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::conj(v[i]);
    return acc;
}

double norm2(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

namespace {
constexpr double kHermitianTol = 1e-12;
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian: matrix not square");
    const std::size_t n = m.rows();
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_asym = std::max(max_asym, std::abs(m(i, i).imag()));
        for (std::size_t j = i + 1; j < n; ++j)
            max_asym = std::max(max_asym, std::abs(m(i, j) - std::conj(m(j, i))));
    }
    if (max_asym > kHermitianTol)
        throw NotHermitianError(max_asym, "matrix is not Hermitian (max asymmetry " +
                                              std::to_string(max_asym) + ")");
    m_ = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m_(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m_(i, j) = v;
            m_(j, i) = std::conj(v);
        }
    }
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return hermitian_unchecked(std::move(m));
}

bool HermitianMatrix::is_real() const {
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < dim(); ++j)
            if (m_(i, j).imag() != 0.0) return false;
    return true;
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& rhs) const {
    return hermitian_unchecked(m_ + rhs.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& rhs) const {
    return hermitian_unchecked(m_ - rhs.m_);
}

HermitianMatrix HermitianMatrix::scaled(double s) const {
    Matrix m = m_;
    m *= Complex(s);
    return hermitian_unchecked(std::move(m));
}

HermitianMatrix hermitian_unchecked(Matrix m) {
    return HermitianMatrix(std::move(m), HermitianMatrix::unchecked_tag{});
}

HermitianMatrix hermitize(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitize: matrix not square");
    const std::size_t n = m.rows();
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        r(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            r(i, j) = v;
            r(j, i) = std::conj(v);
        }
    }
    return hermitian_unchecked(std::move(r));
}

}  // namespace spectral

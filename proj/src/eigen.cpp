// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spectral {

namespace {

constexpr std::size_t kJacobiMaxDim = 32;
constexpr double kOffDiagStop = 1e-13;  // off-diagonal Frobenius / ||H||_F
constexpr int kMaxSweeps = 60;

inline double conj_or_id(double x) { return x; }
inline Complex conj_or_id(const Complex& x) { return std::conj(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(const Complex& x) { return std::norm(x); }

template <typename S>
struct Dense {
    std::size_t n = 0;
    std::vector<S> a;  // row-major

    explicit Dense(std::size_t n) : n(n), a(n * n) {}
    S& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const S& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    void set_identity() {
        std::fill(a.begin(), a.end(), S(0.0));
        for (std::size_t i = 0; i < n; ++i) at(i, i) = S(1.0);
    }
};

template <typename S>
double offdiag_frobenius(const Dense<S>& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = i + 1; j < m.n; ++j) s += abs2(m.at(i, j));
    return std::sqrt(2.0 * s);
}

template <typename S>
double frobenius(const Dense<S>& m) {
    double s = 0.0;
    for (const auto& v : m.a) s += abs2(v);
    return std::sqrt(s);
}

// One cyclic Jacobi rotation zeroing a[p][q]; updates rows/columns p,q of a
// and, when v is non-null, columns p,q of v.
template <typename S>
void jacobi_rotate(Dense<S>& a, std::size_t p, std::size_t q, Dense<S>* v) {
    const S h = a.at(p, q);
    const double habs = std::sqrt(abs2(h));
    if (habs == 0.0) return;
    const S phase = h * S(1.0 / habs);
    const double app = std::real(a.at(p, p));
    const double aqq = std::real(a.at(q, q));
    const double theta = (aqq - app) / (2.0 * habs);
    double t;
    if (std::abs(theta) > 1e153) {
        t = 0.5 / theta;  // avoid theta^2 overflow
    } else {
        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const S sigma = phase * S(s);

    const std::size_t n = a.n;
    for (std::size_t j = 0; j < n; ++j) {  // columns p,q of every row
        const S ajp = a.at(j, p);
        const S ajq = a.at(j, q);
        a.at(j, p) = S(c) * ajp - conj_or_id(sigma) * ajq;
        a.at(j, q) = sigma * ajp + S(c) * ajq;
    }
    for (std::size_t j = 0; j < n; ++j) {  // rows p,q of every column
        const S apj = a.at(p, j);
        const S aqj = a.at(q, j);
        a.at(p, j) = S(c) * apj - sigma * aqj;
        a.at(q, j) = conj_or_id(sigma) * apj + S(c) * aqj;
    }
    a.at(p, p) = S(std::real(a.at(p, p)));
    a.at(q, q) = S(std::real(a.at(q, q)));
    a.at(p, q) = S(0.0);
    a.at(q, p) = S(0.0);

    if (v) {
        for (std::size_t j = 0; j < n; ++j) {
            const S vjp = v->at(j, p);
            const S vjq = v->at(j, q);
            v->at(j, p) = S(c) * vjp - conj_or_id(sigma) * vjq;
            v->at(j, q) = sigma * vjp + S(c) * vjq;
        }
    }
}

template <typename S>
void jacobi_eigen(Dense<S>& a, std::vector<double>& values, Dense<S>* v) {
    const std::size_t n = a.n;
    if (v) v->set_identity();
    values.assign(n, 0.0);
    if (n == 0) return;
    const double norm = frobenius(a);
    const double stop = kOffDiagStop * std::max(norm, 1e-300);
    const double elem_skip = stop / double(n + 1);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_frobenius(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::sqrt(abs2(a.at(p, q))) > elem_skip) jacobi_rotate(a, p, q, v);
    }
    for (std::size_t i = 0; i < n; ++i) values[i] = std::real(a.at(i, i));
}

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form: d = diagonal, e = subdiagonal (e[0] unused), q = accumulated unitary
// with q* a q = tridiag. Phases of complex subdiagonals are absorbed into q.
template <typename S>
void tridiagonalize(Dense<S>& a, std::vector<double>& d, std::vector<double>& e, Dense<S>* q) {
    const std::size_t n = a.n;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    if (q) q->set_identity();
    if (n == 0) return;

    std::vector<S> sub(n, S(0.0));  // complex subdiagonal before phase sweep
    std::vector<S> vvec(n), w(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column below the diagonal
        double xnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm2 += abs2(a.at(i, k));
        const double xnorm = std::sqrt(xnorm2);
        const S x0 = a.at(k + 1, k);
        if (xnorm == 0.0) {
            sub[k + 1] = S(0.0);
            continue;
        }
        const double x0abs = std::sqrt(abs2(x0));
        const S phase = (x0abs == 0.0) ? S(1.0) : x0 * S(1.0 / x0abs);
        const S alpha = -phase * S(xnorm);

        // v = x - alpha e1, reflector P = I - beta v v*
        double vnorm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) vvec[i] = a.at(k + 1 + i, k);
        vvec[0] -= alpha;
        for (std::size_t i = 0; i < m; ++i) vnorm2 += abs2(vvec[i]);
        if (vnorm2 == 0.0) {
            sub[k + 1] = alpha;
            continue;
        }
        const double beta = 2.0 / vnorm2;

        // w = beta * A22 v ; K = beta/2 * v* w ; A22 -= v w* + w v* - 2K v v*
        for (std::size_t i = 0; i < m; ++i) {
            S acc(0.0);
            for (std::size_t j = 0; j < m; ++j) acc += a.at(k + 1 + i, k + 1 + j) * vvec[j];
            w[i] = S(beta) * acc;
        }
        S vw(0.0);
        for (std::size_t i = 0; i < m; ++i) vw += conj_or_id(vvec[i]) * w[i];
        const S kcoef = S(0.5 * beta) * vw;
        for (std::size_t i = 0; i < m; ++i) w[i] -= kcoef * vvec[i];
        for (std::size_t i = 0; i < m; ++i) {
            const S vi = vvec[i];
            const S wi = w[i];
            for (std::size_t j = 0; j < m; ++j)
                a.at(k + 1 + i, k + 1 + j) -=
                    vi * conj_or_id(w[j]) + wi * conj_or_id(vvec[j]);
        }

        a.at(k + 1, k) = alpha;
        a.at(k, k + 1) = conj_or_id(alpha);
        for (std::size_t i = k + 2; i < n; ++i) {
            a.at(i, k) = S(0.0);
            a.at(k, i) = S(0.0);
        }
        sub[k + 1] = alpha;

        if (q) {  // Q <- Q (I - beta v v*)
            for (std::size_t r = 0; r < n; ++r) {
                S acc(0.0);
                for (std::size_t j = 0; j < m; ++j) acc += q->at(r, k + 1 + j) * vvec[j];
                acc *= S(beta);
                for (std::size_t j = 0; j < m; ++j)
                    q->at(r, k + 1 + j) -= acc * conj_or_id(vvec[j]);
            }
        }
    }
    if (n >= 2) sub[n - 1] = a.at(n - 1, n - 2);

    // Diagonal phase sweep making the subdiagonal real non-negative.
    std::vector<S> phi(n, S(1.0));
    for (std::size_t i = 1; i < n; ++i) {
        const double m = std::sqrt(abs2(sub[i]));
        const S ph = (m == 0.0) ? S(1.0) : sub[i] * S(1.0 / m);
        phi[i] = phi[i - 1] * ph;
        e[i] = m;
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = std::real(a.at(i, i));
    if (q) {
        for (std::size_t j = 0; j < n; ++j) {
            const S ph = phi[j];
            for (std::size_t r = 0; r < n; ++r) q->at(r, j) *= ph;
        }
    }
}

inline double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Implicit QL with Wilkinson shift on a real symmetric tridiagonal matrix.
// On exit d holds eigenvalues (unordered); rotations are accumulated into the
// columns of q when it is non-null.
template <typename S>
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Dense<S>* q) {
    const std::size_t n = d.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 50)
                    throw std::runtime_error("tridiagonal QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (q) {
                        for (std::size_t k = 0; k < q->n; ++k) {
                            const S qk1 = q->at(k, i + 1);
                            const S qk0 = q->at(k, i);
                            q->at(k, i + 1) = S(s) * qk0 + S(c) * qk1;
                            q->at(k, i) = S(c) * qk0 - S(s) * qk1;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

template <typename S>
void dense_eigen(Dense<S> a, std::vector<double>& values, Dense<S>* vectors) {
    const std::size_t n = a.n;
    if (n <= kJacobiMaxDim) {
        jacobi_eigen(a, values, vectors);
    } else {
        std::vector<double> d, e;
        tridiagonalize(a, d, e, vectors);
        tridiagonal_ql(d, e, vectors);
        values = std::move(d);
    }
    // ascending order, stable in the original index for ties
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = values[perm[i]];
    values = std::move(sorted);
    if (vectors) {
        Dense<S> vs(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) vs.at(i, j) = vectors->at(i, perm[j]);
        *vectors = std::move(vs);
    }
}

Dense<Complex> to_dense(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    Dense<Complex> a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = h(i, j);
    return a;
}

Dense<double> to_dense_real(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    Dense<double> a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = h(i, j).real();
    return a;
}

EigenDecomposition eigen_dispatch(const HermitianMatrix& h, bool want_vectors) {
    const std::size_t n = h.dim();
    EigenDecomposition r;
    if (h.is_real()) {
        Dense<double> a = to_dense_real(h);
        Dense<double> v(want_vectors ? n : 0);
        dense_eigen(std::move(a), r.eigenvalues, want_vectors ? &v : nullptr);
        if (want_vectors) {
            r.eigenvectors = Matrix(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) r.eigenvectors(i, j) = v.at(i, j);
        }
    } else {
        Dense<Complex> a = to_dense(h);
        Dense<Complex> v(want_vectors ? n : 0);
        dense_eigen(std::move(a), r.eigenvalues, want_vectors ? &v : nullptr);
        if (want_vectors) {
            r.eigenvectors = Matrix(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) r.eigenvectors(i, j) = v.at(i, j);
        }
    }
    return r;
}

}  // namespace

EigenDecomposition hermitian_eigen(const HermitianMatrix& h) { return eigen_dispatch(h, true); }

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h) {
    return eigen_dispatch(h, false).eigenvalues;
}

Inertia inertia_of_values(const std::vector<double>& values, double zero_tol) {
    if (zero_tol <= 0.0) throw std::invalid_argument("inertia: zero_tol must be positive");
    double radius = 0.0;
    for (double v : values) radius = std::max(radius, std::abs(v));
    const double band = zero_tol * std::max(1.0, radius);
    Inertia r;
    for (double v : values) {
        if (v < -band)
            ++r.negative;
        else if (v > band)
            ++r.positive;
        else
            ++r.zero;
    }
    return r;
}

Inertia inertia(const HermitianMatrix& h, double zero_tol) {
    return inertia_of_values(hermitian_eigenvalues(h), zero_tol);
}

Matrix cholesky(const HermitianMatrix& m) {
    const std::size_t n = m.dim();
    const double scale = std::max(m.frobenius_norm(), 1e-300);
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = m(j, j).real();
        for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
        if (pivot <= 1e-12 * scale)
            throw NotPositiveDefiniteError(j, pivot,
                                           "matrix is not positive definite (pivot " +
                                               std::to_string(pivot) + " at index " +
                                               std::to_string(j) + ")");
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return l;
}

bool cholesky_succeeds(const HermitianMatrix& m, double shift) {
    const std::size_t n = m.dim();
    const double scale = std::max(m.frobenius_norm(), 1e-300);
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = m(j, j).real() + shift;
        for (std::size_t k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
        if (pivot <= 1e-14 * scale) return false;
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return true;
}

namespace {

// B = L^{-1} F L^{-*} for lower-triangular L, via two triangular solves.
Matrix reduce_to_standard(const Matrix& l, const HermitianMatrix& f) {
    const std::size_t n = l.rows();
    // Y = L^{-1} F  (forward substitution on each column of F)
    Matrix y(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = f(i, col);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * y(k, col);
            y(i, col) = acc / l(i, i).real();
        }
    }
    // B = Y L^{-*}  <=>  B L* = Y  <=>  L B* = Y*  (forward substitution)
    Matrix ystar = y.adjoint();
    Matrix bstar(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = ystar(i, col);
            for (std::size_t k = 0; k < i; ++k) acc -= l(i, k) * bstar(k, col);
            bstar(i, col) = acc / l(i, i).real();
        }
    }
    return bstar.adjoint();
}

}  // namespace

EigenDecomposition generalized_eigen(const HermitianMatrix& f, const HermitianMatrix& m) {
    if (f.dim() != m.dim()) throw std::invalid_argument("generalized_eigen: dimension mismatch");
    const Matrix l = cholesky(m);
    const HermitianMatrix b = hermitize(reduce_to_standard(l, f));
    EigenDecomposition dec = hermitian_eigen(b);
    // back-transform: solve L* V = W (backward substitution per column)
    const std::size_t n = f.dim();
    Matrix v(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t ii = n; ii-- > 0;) {
            Complex acc = dec.eigenvectors(ii, col);
            for (std::size_t k = ii + 1; k < n; ++k) acc -= std::conj(l(k, ii)) * v(k, col);
            v(ii, col) = acc / l(ii, ii).real();
        }
    }
    dec.eigenvectors = std::move(v);
    return dec;
}

std::vector<double> generalized_eigenvalues(const HermitianMatrix& f, const HermitianMatrix& m) {
    if (f.dim() != m.dim())
        throw std::invalid_argument("generalized_eigenvalues: dimension mismatch");
    const Matrix l = cholesky(m);
    const HermitianMatrix b = hermitize(reduce_to_standard(l, f));
    return hermitian_eigenvalues(b);
}

}  // namespace spectral

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/galerkin.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/eigen.hpp"

namespace spectral {

namespace {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_q.
void gauss_legendre(std::size_t q, std::vector<double>& xi, std::vector<double>& w) {
    xi.resize(q);
    w.resize(q);
    for (std::size_t i = 0; i < q; ++i) {
        double x = std::cos(M_PI * (double(i) + 0.75) / (double(q) + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            const double dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= q; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
            p0 = p1;
            p1 = p2;
        }
        const double dp = q * (x * p1 - p0) / (x * x - 1.0);
        xi[q - 1 - i] = 0.5 * (x + 1.0);
        w[q - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Coefficients (power basis) of the 2n Hermite shape functions of degree
// 2n-1 on [0,1]: shape (node*n + k) has d^j/dxi^j at the nodes equal to
// delta_{node,node'} delta_{k,j}. Solved from the interpolation conditions.
std::vector<std::vector<double>> hermite_coefficients(std::size_t n) {
    const std::size_t m = 2 * n;
    std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
    auto falling = [](std::size_t p, std::size_t k) {
        double f = 1.0;
        for (std::size_t i = 0; i < k; ++i) f *= double(p - i);
        return f;
    };
    for (std::size_t node = 0; node < 2; ++node) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t row = node * n + k;
            for (std::size_t p = k; p < m; ++p)
                a[row][p] = falling(p, k) * (node == 0 ? (p == k ? 1.0 : 0.0) : 1.0);
        }
    }
    // invert by Gaussian elimination with partial pivoting on [A | I]
    std::vector<std::vector<double>> inv(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        if (d == 0.0) throw std::runtime_error("hermite basis: singular interpolation system");
        for (std::size_t j = 0; j < m; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    // column l of A^{-1} is the coefficient vector of shape l
    std::vector<std::vector<double>> coeffs(m, std::vector<double>(m, 0.0));
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t p = 0; p < m; ++p) coeffs[l][p] = inv[p][l];
    return coeffs;
}

double poly_derivative_at(const std::vector<double>& coeffs, std::size_t r, double x) {
    double acc = 0.0;
    for (std::size_t p = coeffs.size(); p-- > r;) {
        double f = coeffs[p];
        for (std::size_t i = 0; i < r; ++i) f *= double(p - i);
        acc = acc * x + f;
    }
    return acc;
}

}  // namespace

ElementBasis::ElementBasis(std::size_t n, double a, double b, std::size_t elements)
    : n_(n), a_(a), b_(b), elements_(elements) {
    if (n == 0) throw std::invalid_argument("basis: order must be at least 1");
    if (!(a < b)) throw std::invalid_argument("basis: interval endpoints must satisfy a < b");
    if (elements < 2) throw std::invalid_argument("basis: need at least 2 elements");
    if (n > 6) throw std::invalid_argument("basis: orders above 6 are not supported");
    h_ = (b - a) / double(elements);

    const std::size_t q = 2 * n + 2;
    gauss_legendre(q, quad_xi_, quad_w_);

    if (n == 1) {
        // quadratic Lagrange: locals (left end, midpoint, right end)
        local_count_ = 3;
        stride_ = 2;
        dofs_ = 2 * elements + 1;
        shape_.assign(2, std::vector<double>(local_count_ * q));
        for (std::size_t g = 0; g < q; ++g) {
            const double s = quad_xi_[g];
            const double v[3] = {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s),
                                 s * (2.0 * s - 1.0)};
            const double d[3] = {4.0 * s - 3.0, 4.0 - 8.0 * s, 4.0 * s - 1.0};
            for (std::size_t l = 0; l < 3; ++l) {
                shape_[0][l * q + g] = v[l];
                shape_[1][l * q + g] = d[l] / h_;
            }
        }
        trace_dofs_ = {0, 2 * elements};
    } else {
        // Hermite of degree 2n-1; local dof (node, k) carries y^{(k)} at the
        // node, hence the h^k scaling
        local_count_ = 2 * n;
        stride_ = n;
        dofs_ = n * (elements + 1);
        const auto coeffs = hermite_coefficients(n);
        shape_.assign(n + 1, std::vector<double>(local_count_ * q));
        for (std::size_t l = 0; l < local_count_; ++l) {
            const std::size_t k = l % n;  // nodal derivative order of this dof
            for (std::size_t r = 0; r <= n; ++r) {
                const double scale = std::pow(h_, double(k) - double(r));
                for (std::size_t g = 0; g < q; ++g)
                    shape_[r][l * q + g] = scale * poly_derivative_at(coeffs[l], r, quad_xi_[g]);
            }
        }
        trace_dofs_.clear();
        for (std::size_t k = 0; k < n; ++k) trace_dofs_.push_back(k);
        for (std::size_t k = 0; k < n; ++k) trace_dofs_.push_back(n * elements + k);
    }
}

Matrix ElementBasis::trace_matrix() const {
    Matrix t(trace_dofs_.size(), dofs_);
    for (std::size_t i = 0; i < trace_dofs_.size(); ++i) t(i, trace_dofs_[i]) = 1.0;
    return t;
}

std::vector<double> ElementBasis::interpolate(
    const std::vector<std::function<double(double)>>& derivs) const {
    std::vector<double> c(dofs_, 0.0);
    if (n_ == 1) {
        if (derivs.empty()) throw std::invalid_argument("interpolate: need the function itself");
        for (std::size_t i = 0; i < dofs_; ++i) c[i] = derivs[0](a_ + 0.5 * h_ * double(i));
    } else {
        if (derivs.size() < n_)
            throw std::invalid_argument("interpolate: need derivatives up to order n-1");
        for (std::size_t node = 0; node <= elements_; ++node) {
            const double x = a_ + h_ * double(node);
            for (std::size_t k = 0; k < n_; ++k) c[n_ * node + k] = derivs[k](x);
        }
    }
    return c;
}

double ElementBasis::energy(const std::vector<double>& coeffs,
                            const std::vector<std::function<double(double)>>& coefficients) const {
    if (coeffs.size() != dofs_) throw std::invalid_argument("energy: coefficient size mismatch");
    if (coefficients.size() != n_ + 1)
        throw std::invalid_argument("energy: need n+1 coefficient functions");
    const std::size_t q = quad_xi_.size();
    double total = 0.0;
    for (std::size_t e = 0; e < elements_; ++e) {
        for (std::size_t g = 0; g < q; ++g) {
            const double x = quadrature_x(e, g);
            const double wx = quad_w_[g] * h_;
            for (std::size_t k = 0; k <= n_; ++k) {
                const std::size_t r = n_ - k;
                double val = 0.0;
                for (std::size_t l = 0; l < local_count_; ++l)
                    val += coeffs[global_dof(e, l)] * shape_value(r, l, g);
                total += wx * coefficients[k](x) * val * val;
            }
        }
    }
    return total;
}

ElementBasis build_basis(std::size_t n, double a, double b, std::size_t elements) {
    return ElementBasis(n, a, b, elements);
}

ReductionMap ReductionMap::trivial(std::size_t dofs) {
    ReductionMap r;
    r.trivial_ = true;
    r.full_dim_ = dofs;
    r.reduced_dim_ = dofs;
    return r;
}

ReductionMap ReductionMap::orthogonal_to_kernel(const ElementBasis& basis,
                                                const ConstraintData& constraint) {
    const std::size_t tn = basis.trace_dof_indices().size();
    if (constraint.kernel_basis.rows() != tn)
        throw std::invalid_argument("reduction: kernel size does not match the trace size");
    if (constraint.kernel_dim() == 0) return trivial(basis.dofs());

    ReductionMap r;
    r.trivial_ = false;
    r.full_dim_ = basis.dofs();
    r.trace_dofs_ = basis.trace_dof_indices();
    std::vector<bool> is_trace(basis.dofs(), false);
    for (std::size_t t : r.trace_dofs_) is_trace[t] = true;
    for (std::size_t i = 0; i < basis.dofs(); ++i)
        if (!is_trace[i]) r.free_dofs_.push_back(i);

    // admissible trace values = null(K*) = eigenvectors of the projector
    // K K* with eigenvalue 0
    const Matrix& k = constraint.kernel_basis;
    const HermitianMatrix proj = hermitize(k * k.adjoint());
    EigenDecomposition dec = hermitian_eigen(proj);
    std::vector<std::size_t> null_cols;
    for (std::size_t j = 0; j < tn; ++j)
        if (dec.eigenvalues[j] < 0.5) null_cols.push_back(j);
    r.trace_block_ = Matrix(tn, null_cols.size());
    for (std::size_t j = 0; j < null_cols.size(); ++j)
        for (std::size_t i = 0; i < tn; ++i)
            r.trace_block_(i, j) = dec.eigenvectors(i, null_cols[j]);
    r.reduced_dim_ = r.free_dofs_.size() + null_cols.size();
    return r;
}

HermitianMatrix ReductionMap::reduce(const HermitianMatrix& h) const {
    if (h.dim() != full_dim_) throw std::invalid_argument("reduce: dimension mismatch");
    if (trivial_) return h;
    const std::size_t nf = free_dofs_.size();
    const std::size_t nt = trace_dofs_.size();
    const std::size_t k = trace_block_.cols();
    Matrix out(reduced_dim_, reduced_dim_);
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nf; ++j) out(i, j) = h(free_dofs_[i], free_dofs_[j]);
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t s = 0; s < k; ++s) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < nt; ++t)
                acc += h(free_dofs_[i], trace_dofs_[t]) * trace_block_(t, s);
            out(i, nf + s) = acc;
            out(nf + s, i) = std::conj(acc);
        }
    }
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t s2 = s; s2 < k; ++s2) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < nt; ++t) {
                Complex row = 0.0;
                for (std::size_t t2 = 0; t2 < nt; ++t2)
                    row += h(trace_dofs_[t], trace_dofs_[t2]) * trace_block_(t2, s2);
                acc += std::conj(trace_block_(t, s)) * row;
            }
            out(nf + s, nf + s2) = acc;
            out(nf + s2, nf + s) = std::conj(acc);
        }
    }
    return hermitize(out);
}

std::vector<Complex> ReductionMap::expand(const std::vector<Complex>& reduced) const {
    if (reduced.size() != reduced_dim_) throw std::invalid_argument("expand: dimension mismatch");
    if (trivial_) return reduced;
    std::vector<Complex> full(full_dim_, Complex(0.0));
    for (std::size_t i = 0; i < free_dofs_.size(); ++i) full[free_dofs_[i]] = reduced[i];
    for (std::size_t t = 0; t < trace_dofs_.size(); ++t) {
        Complex acc = 0.0;
        for (std::size_t s = 0; s < trace_block_.cols(); ++s)
            acc += trace_block_(t, s) * reduced[free_dofs_.size() + s];
        full[trace_dofs_[t]] = acc;
    }
    return full;
}

Matrix ReductionMap::dense() const {
    Matrix r(full_dim_, reduced_dim_);
    if (trivial_) {
        for (std::size_t i = 0; i < full_dim_; ++i) r(i, i) = 1.0;
        return r;
    }
    for (std::size_t i = 0; i < free_dofs_.size(); ++i) r(free_dofs_[i], i) = 1.0;
    for (std::size_t t = 0; t < trace_dofs_.size(); ++t)
        for (std::size_t s = 0; s < trace_block_.cols(); ++s)
            r(trace_dofs_[t], free_dofs_.size() + s) = trace_block_(t, s);
    return r;
}

namespace {

// Shared assembly core: integral blocks for every p_k plus an optional trace
// term, symmetrized, then reduced.
HermitianMatrix assemble_matrix(const ElementBasis& basis,
                                const std::vector<CoefficientFn>& coefficients,
                                const HermitianMatrix* boundary_a,
                                const std::shared_ptr<const ReductionMap>& reduction,
                                bool check_positivity) {
    const std::size_t n = basis.order();
    if (coefficients.size() != n + 1)
        throw std::invalid_argument("assemble: need exactly n+1 coefficient functions");
    const std::size_t dofs = basis.dofs();
    const std::size_t q = basis.quadrature_points();
    const std::size_t nl = basis.local_functions();
    const double h = basis.mesh_width();

    std::vector<double> full(dofs * dofs, 0.0);
    std::vector<double> pvals(n + 1);
    for (std::size_t e = 0; e < basis.elements(); ++e) {
        for (std::size_t g = 0; g < q; ++g) {
            const double x = basis.quadrature_x(e, g);
            const double wx = basis.quadrature_weight(g) * h;
            for (std::size_t k = 0; k <= n; ++k) pvals[k] = coefficients[k](x);
            if (check_positivity && !(pvals[0] > 0.0))
                throw NonPositiveLeadingCoefficientError(
                    x, pvals[0],
                    "leading coefficient is not positive at x = " + std::to_string(x));
            for (std::size_t k = 0; k <= n; ++k) {
                const double pw = wx * pvals[k];
                if (pw == 0.0) continue;
                const std::size_t r = n - k;
                for (std::size_t l1 = 0; l1 < nl; ++l1) {
                    const double v1 = basis.shape_value(r, l1, g) * pw;
                    if (v1 == 0.0) continue;
                    const std::size_t i = basis.global_dof(e, l1);
                    for (std::size_t l2 = 0; l2 < nl; ++l2)
                        full[i * dofs + basis.global_dof(e, l2)] +=
                            v1 * basis.shape_value(r, l2, g);
                }
            }
        }
    }

    Matrix f(dofs, dofs);
    for (std::size_t i = 0; i < dofs; ++i)
        for (std::size_t j = 0; j < dofs; ++j) f(i, j) = full[i * dofs + j];

    if (boundary_a) {
        const auto& trace = basis.trace_dof_indices();
        if (boundary_a->dim() != trace.size())
            throw std::invalid_argument("assemble: boundary matrix size must be 2n");
        for (std::size_t t1 = 0; t1 < trace.size(); ++t1)
            for (std::size_t t2 = 0; t2 < trace.size(); ++t2)
                f(trace[t1], trace[t2]) += (*boundary_a)(t1, t2);
    }

    const HermitianMatrix fh = hermitize(f);
    return reduction ? reduction->reduce(fh) : fh;
}

HermitianMatrix assemble_mass(const ElementBasis& basis,
                              const std::shared_ptr<const ReductionMap>& reduction) {
    std::vector<CoefficientFn> mass_coeffs(basis.order() + 1,
                                           [](double) { return 0.0; });
    mass_coeffs[basis.order()] = [](double) { return 1.0; };
    return assemble_matrix(basis, mass_coeffs, nullptr, reduction, false);
}

}  // namespace

AssembledForm assemble_form(const ElementBasis& basis,
                            const std::vector<CoefficientFn>& coefficients,
                            const HermitianMatrix* boundary_a,
                            std::shared_ptr<const ReductionMap> reduction) {
    AssembledForm out;
    out.f = assemble_matrix(basis, coefficients, boundary_a, reduction, true);
    out.m = assemble_mass(basis, reduction);
    out.constraint_reduced = reduction && !reduction->is_trivial();
    out.reduction = std::move(reduction);
    return out;
}

HermitianMatrix assemble_form_derivative(const ElementBasis& basis,
                                         const std::vector<CoefficientFn>& coefficient_derivatives,
                                         const HermitianMatrix* boundary_a_derivative,
                                         std::shared_ptr<const ReductionMap> reduction) {
    return assemble_matrix(basis, coefficient_derivatives, boundary_a_derivative, reduction,
                           false);
}

}  // namespace spectral

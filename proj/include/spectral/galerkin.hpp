// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "spectral/boundary.hpp"
#include "spectral/matrix.hpp"

namespace spectral {

class NonPositiveLeadingCoefficientError : public std::runtime_error {
public:
    NonPositiveLeadingCoefficientError(double x, double value, std::string what)
        : std::runtime_error(std::move(what)), x(x), value(value) {}
    double x;
    double value;
};

/// Conforming finite-element space for forms of derivative order n on a
/// uniform mesh of [a, b]. Nodal boundary dofs coincide with the entries of
/// the boundary-trace vector (values and derivatives up to order n-1 at both
/// endpoints), so trace terms and trace constraints are exact.
///
/// n == 1 uses quadratic Lagrange elements (endpoint + midpoint values);
/// n >= 2 uses Hermite elements of degree 2n-1 with n dofs per mesh node.
class ElementBasis {
public:
    ElementBasis(std::size_t n, double a, double b, std::size_t elements);

    std::size_t order() const { return n_; }
    double left() const { return a_; }
    double right() const { return b_; }
    std::size_t elements() const { return elements_; }
    std::size_t dofs() const { return dofs_; }
    double mesh_width() const { return h_; }

    /// Global dof indices carrying the trace vector
    /// (y(a),...,y^{(n-1)}(a), y(b),...,y^{(n-1)}(b)), in that order.
    const std::vector<std::size_t>& trace_dof_indices() const { return trace_dofs_; }
    /// Trace vector as a (2n x dofs) selection matrix.
    Matrix trace_matrix() const;

    std::size_t local_functions() const { return local_count_; }
    std::size_t quadrature_points() const { return quad_xi_.size(); }
    double quadrature_x(std::size_t element, std::size_t g) const {
        return a_ + (double(element) + quad_xi_[g]) * h_;
    }
    double quadrature_weight(std::size_t g) const { return quad_w_[g]; }
    std::size_t global_dof(std::size_t element, std::size_t local) const {
        return stride_ * element + local;
    }
    /// d^r phi_local / dx^r at quadrature point g (physical derivative).
    double shape_value(std::size_t r, std::size_t local, std::size_t g) const {
        return shape_[r][local * quad_xi_.size() + g];
    }

    /// Coefficient vector interpolating y: `derivs[k]` evaluates y^{(k)};
    /// quadratic elements need only derivs[0], Hermite elements need
    /// derivs[0..n-1].
    std::vector<double> interpolate(
        const std::vector<std::function<double(double)>>& derivs) const;

    /// Evaluate sum_k integral p_k |y^{(n-k)}|^2 dx for a coefficient vector,
    /// with the same quadrature the assembly uses.
    double energy(const std::vector<double>& coeffs,
                  const std::vector<std::function<double(double)>>& coefficients) const;

private:
    std::size_t n_ = 0;
    double a_ = 0.0, b_ = 0.0, h_ = 0.0;
    std::size_t elements_ = 0, dofs_ = 0, local_count_ = 0, stride_ = 0;
    std::vector<double> quad_xi_, quad_w_;
    // shape_[r][local * nq + g] = d^r N_local/dx^r at quad point g, including
    // the nodal-derivative scaling, valid on every element (uniform mesh)
    std::vector<std::vector<double>> shape_;
    std::vector<std::size_t> trace_dofs_;
};

ElementBasis build_basis(std::size_t n, double a, double b, std::size_t elements);

/// Orthonormal basis of the coefficient subspace whose trace vector is
/// orthogonal to a given kernel; identity on all non-trace dofs.
class ReductionMap {
public:
    static ReductionMap trivial(std::size_t dofs);
    static ReductionMap orthogonal_to_kernel(const ElementBasis& basis,
                                             const ConstraintData& constraint);

    std::size_t full_dim() const { return full_dim_; }
    std::size_t reduced_dim() const { return reduced_dim_; }
    bool is_trivial() const { return trivial_; }

    HermitianMatrix reduce(const HermitianMatrix& h) const;
    std::vector<Complex> expand(const std::vector<Complex>& reduced) const;
    Matrix dense() const;

private:
    bool trivial_ = true;
    std::size_t full_dim_ = 0, reduced_dim_ = 0;
    std::vector<std::size_t> free_dofs_;
    std::vector<std::size_t> trace_dofs_;
    Matrix trace_block_;  // 2n x k, orthonormal columns
};

/// Form and mass matrices of the discretized quadratic form
///   sum_k integral p_k |y^{(n-k)}|^2 dx + <A y^trace, y^trace>,
/// reduced to the constraint subspace when a reduction is supplied.
struct AssembledForm {
    HermitianMatrix f;
    HermitianMatrix m;
    bool constraint_reduced = false;
    std::shared_ptr<const ReductionMap> reduction;
};

using CoefficientFn = std::function<double(double)>;

/// coefficients[k] evaluates p_k(x) (k = 0..n) at the current parameter
/// value; p_0 must be positive at every quadrature point.
AssembledForm assemble_form(const ElementBasis& basis,
                            const std::vector<CoefficientFn>& coefficients,
                            const HermitianMatrix* boundary_a,
                            std::shared_ptr<const ReductionMap> reduction);

/// Same bilinear assembly with the lambda-derivatives of the coefficients and
/// the derivative of the boundary matrix; no positivity requirement. The
/// reduction must be the one used for the form itself.
HermitianMatrix assemble_form_derivative(const ElementBasis& basis,
                                         const std::vector<CoefficientFn>& coefficient_derivatives,
                                         const HermitianMatrix* boundary_a_derivative,
                                         std::shared_ptr<const ReductionMap> reduction);

}  // namespace spectral

// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "spectral/matrix.hpp"

namespace spectral {
namespace numdiff {

/// Finite-difference weights for the m-th derivative at z on an arbitrary
/// point set (Fornberg's recursion).
std::vector<double> fornberg_weights(double z, const std::vector<double>& points,
                                     std::size_t order);

/// Step for the given derivative order, scaled by the domain length. First
/// order follows the documented 1e-5 relative step; higher orders use larger
/// steps so that rounding noise stays below the truncation error.
double default_step(std::size_t order, double domain_length);

/// Numerical derivative of order `order` (0..4) at x with an (order+6)-point
/// stencil of spacing `step` (exact for polynomials up to degree order+5).
/// The stencil is shifted to stay inside [lo, hi], turning one-sided at the
/// ends, so f is never evaluated outside the declared domain.
template <typename T>
T derivative(const std::function<T(double)>& f, double x, std::size_t order, double step,
             double lo, double hi) {
    if (order > 6) throw std::invalid_argument("numdiff: derivative order too high");
    if (order == 0) return f(x);
    if (!(step > 0.0)) throw std::invalid_argument("numdiff: step must be positive");
    const std::size_t npts = order + 6;
    // symmetric window around x, clamped into [lo, hi]
    double start = x - 0.5 * double(npts - 1) * step;
    if (start < lo) start = lo;
    if (start + double(npts - 1) * step > hi) start = hi - double(npts - 1) * step;
    if (start < lo - 1e-12 * (hi - lo))
        throw std::invalid_argument("numdiff: stencil does not fit in the domain");
    std::vector<double> pts(npts);
    for (std::size_t i = 0; i < npts; ++i) pts[i] = start + double(i) * step;
    const std::vector<double> w = fornberg_weights(x, pts, order);
    T acc{};
    for (std::size_t i = 0; i < npts; ++i) acc += T(w[i]) * f(pts[i]);
    return acc;
}

}  // namespace numdiff
}  // namespace spectral

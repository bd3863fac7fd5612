// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/numdiff.hpp"

#include <cmath>

namespace spectral {
namespace numdiff {

std::vector<double> fornberg_weights(double z, const std::vector<double>& points,
                                     std::size_t order) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("fornberg: empty point set");
    if (order >= n)
        throw std::invalid_argument("fornberg: need more points than the derivative order");
    // c[i][k]: weight of node i for derivative order k
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = points[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = points[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = points[i] - points[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (double(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - double(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][order];
    return w;
}

double default_step(std::size_t order, double domain_length) {
    // first-order steps follow the 1e-5 relative convention; higher orders
    // trade truncation for rounding control
    static const double rel[] = {1e-5, 1e-5, 1e-4, 3e-3, 1e-2, 2e-2, 3e-2};
    const std::size_t idx = std::min<std::size_t>(order, 6);
    return rel[idx] * domain_length;
}

}  // namespace numdiff
}  // namespace spectral

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "f2p/errors.hpp"

namespace f2p {

/// Gauss-Legendre quadrature on [0, 1]. Nodes are strictly increasing and
/// symmetric about 0.5; weights are positive and sum to 1.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// P_q(x) and P_q'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_pair(int q, double x) {
    if (q == 0) return {1.0, 0.0};
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    // derivative identity; at x = 0 (odd q) use P'_q(0) = q P_{q-1}(0)
    const double dp = (x == 0.0) ? q * p0 : q * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace detail

/// Nodes/weights of the q-point Gauss-Legendre rule mapped from [-1, 1] to
/// [0, 1]. Roots are found by Newton iteration from the Chebyshev initial
/// guess; each root is mirrored so the rule is symmetric bit for bit.
inline QuadratureRule gauss_legendre(int q) {
    if (q < 1 || q > 64) throw InvalidOrder("gauss_legendre: order must be in [1, 64]");
    QuadratureRule rule;
    rule.order = q;
    rule.nodes.resize(q);
    rule.weights.resize(q);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon();
    for (int i = 0; i < q / 2; ++i) {
        // i-th largest root of P_q on (0, 1)
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            const auto [p, d] = detail::legendre_pair(q, x);
            dp = d;
            const double dx = -p / d;
            x += dx;
            if (std::abs(dx) <= tol * std::max(1.0, std::abs(x))) break;
        }
        dp = detail::legendre_pair(q, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[q - 1 - i] = 0.5 + 0.5 * x;
        rule.nodes[i] = 0.5 - 0.5 * x;
        rule.weights[q - 1 - i] = 0.5 * w;
        rule.weights[i] = 0.5 * w;
    }
    if (q % 2 == 1) {
        const double dp = detail::legendre_pair(q, 0.0).second;
        rule.nodes[q / 2] = 0.5;
        rule.weights[q / 2] = 1.0 / (dp * dp);
    }
    return rule;
}

}  // namespace f2p

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace flexo::util {

/// Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
/// Nodes by Newton iteration on the Legendre polynomial, computed once per n.
inline void gauss_legendre_01(int n, std::vector<double>& pts, std::vector<double>& wts) {
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre_01: n out of range");
    pts.resize(static_cast<size_t>(n));
    wts.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Initial guess (Chebyshev-like) on [-1, 1].
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        pts[static_cast<size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        wts[static_cast<size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace flexo::util

#include "laplab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace laplab {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n, double a,
                                                                   double b) {
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev estimate.
        double t = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * double(k) + 1.0) * t * p1 - double(k) * p2) / (double(k) + 1.0);
            }
            const double dp = double(n) * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p1 = 0.0;
        p0 = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * double(k) + 1.0) * t * p1 - double(k) * p2) / (double(k) + 1.0);
        }
        const double dp = double(n) * (t * p0 - p1) / (t * t - 1.0);
        x[n - 1 - i] = 0.5 * (b - a) * t + 0.5 * (a + b);
        w[n - 1 - i] = (b - a) / ((1.0 - t * t) * dp * dp);
    }
    return {std::move(x), std::move(w)};
}

} // namespace laplab

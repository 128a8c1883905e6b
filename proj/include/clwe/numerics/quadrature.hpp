#pragma once

#include "clwe/error.hpp"

#include <cmath>
#include <cstddef>

namespace clwe::numerics {

struct QuadratureResult {
    double value = 0.0;
    double last_change = 0.0;  // |I_h - I_{2h}| at the accepted step
    std::size_t intervals = 0;
};

// Composite Simpson on [a, b], halving the step until two successive
// estimates differ by less than tol. Throws ToleranceError if the step has
// been halved max_levels times without stabilizing.
template <class F>
QuadratureResult simpson(F&& f, double a, double b, double tol, std::size_t initial_intervals = 256,
                         int max_levels = 20) {
    if (!(b > a)) throw ParameterError("simpson: empty interval");
    std::size_t m = initial_intervals + (initial_intervals % 2);
    // Keep endpoint, odd-node and even-node sums so each halving only adds
    // the new midpoints.
    const double ends = f(a) + f(b);
    double h = (b - a) / static_cast<double>(m);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < m; ++i) (i % 2 ? odd : even) += f(a + h * static_cast<double>(i));
    double prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    for (int level = 0; level < max_levels; ++level) {
        even += odd;
        odd = 0.0;
        m *= 2;
        h *= 0.5;
        for (std::size_t i = 1; i < m; i += 2) odd += f(a + h * static_cast<double>(i));
        const double cur = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
        const double change = std::fabs(cur - prev);
        if (change < tol) return {cur, change, m};
        prev = cur;
    }
    throw ToleranceError("simpson: quadrature did not stabilize");
}

}  // namespace clwe::numerics

#pragma once

#include "clwe/error.hpp"
#include "clwe/lattice/lattice.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace clwe::lattice {

// Extended-precision copy of a Gram-Schmidt frame, used for the bulk loops
// of enumeration where mpfr would dominate the runtime.
struct EnumerationFrame {
    std::size_t n = 0;
    Matrix<long double> basis;           // columns
    Matrix<long double> mu;              // mu(i, j), j < i
    std::vector<long double> bstar_norm2;
};

EnumerationFrame reduced_frame(const Lattice& lattice);
EnumerationFrame given_frame(const Lattice& lattice);

// Coordinates t of x in the Gram-Schmidt frame: x = sum_j t_j b*_j.
std::vector<long double> gram_schmidt_coordinates(const EnumerationFrame& frame, const Vector<Real>& x);

// Visits every coefficient vector k with |k_j + centre_j| <= radius_j at each
// level, where centre_j = shift_j + sum_{i>j} mu(i, j) k_i. The point
// sum_j k_j b_j + sum_j shift_j b*_j then has Gram-Schmidt coordinate
// c_j = k_j + centre_j and squared norm sum_j c_j^2 |b*_j|^2, which is passed
// to the visitor. Returns the number of visited points; throws BudgetError if
// it would exceed `budget`.
template <class Visit>
std::size_t enumerate_box(const EnumerationFrame& f, const std::vector<long double>& shift,
                          const std::vector<long double>& radius, std::size_t budget, Visit&& visit) {
    const std::size_t n = f.n;
    std::vector<long> k(n, 0), hi(n, 0);
    std::vector<long double> centre(n, 0.0L), partial(n + 1, 0.0L);
    std::size_t visited = 0;

    auto open_level = [&](std::size_t j) {
        long double c = shift[j];
        for (std::size_t i = j + 1; i < n; ++i) c += f.mu(i, j) * static_cast<long double>(k[i]);
        centre[j] = c;
        k[j] = static_cast<long>(std::ceil(-c - radius[j]));
        hi[j] = static_cast<long>(std::floor(-c + radius[j]));
    };

    std::size_t j = n - 1;
    open_level(j);
    for (;;) {
        if (k[j] > hi[j]) {
            if (j == n - 1) break;
            ++j;
            ++k[j];
            continue;
        }
        const long double cj = static_cast<long double>(k[j]) + centre[j];
        partial[j] = partial[j + 1] + cj * cj * f.bstar_norm2[j];
        if (j == 0) {
            if (++visited > budget) throw BudgetError("enumeration exceeds the point budget");
            visit(static_cast<const std::vector<long>&>(k), partial[0]);
            ++k[0];
        } else {
            --j;
            open_level(j);
        }
    }
    return visited;
}

// Visits every coefficient vector whose point (with shift as above) has
// squared norm <= r2.
template <class Visit>
std::size_t enumerate_ball(const EnumerationFrame& f, const std::vector<long double>& shift, long double r2,
                           std::size_t budget, Visit&& visit) {
    const std::size_t n = f.n;
    std::vector<long> k(n, 0), hi(n, 0);
    std::vector<long double> centre(n, 0.0L), partial(n + 1, 0.0L);
    std::size_t visited = 0;
    const long double slack = r2 * 1e-15L;

    auto open_level = [&](std::size_t j) {
        long double c = shift[j];
        for (std::size_t i = j + 1; i < n; ++i) c += f.mu(i, j) * static_cast<long double>(k[i]);
        centre[j] = c;
        const long double room = r2 + slack - partial[j + 1];
        const long double rad = room > 0 ? std::sqrt(room / f.bstar_norm2[j]) : -1.0L;
        k[j] = static_cast<long>(std::ceil(-c - rad));
        hi[j] = static_cast<long>(std::floor(-c + rad));
    };

    std::size_t j = n - 1;
    open_level(j);
    for (;;) {
        if (k[j] > hi[j]) {
            if (j == n - 1) break;
            ++j;
            ++k[j];
            continue;
        }
        const long double cj = static_cast<long double>(k[j]) + centre[j];
        partial[j] = partial[j + 1] + cj * cj * f.bstar_norm2[j];
        if (j == 0) {
            if (partial[0] <= r2 + slack) {
                if (++visited > budget) throw BudgetError("enumeration exceeds the point budget");
                visit(static_cast<const std::vector<long>&>(k), partial[0]);
            }
            ++k[0];
        } else {
            --j;
            open_level(j);
        }
    }
    return visited;
}

// Box half-widths certifying that the rho_s mass of all points outside the
// box is at most tol / 2, for any shift. The 1-D tail beyond radius K at a
// level with a = |b*_j|/s is at most 2 e^{-pi a^2 K^2} / (1 - e^{-pi a^2 (2K+1)})
// and each unrestricted level sum is at most 1 + 2q/(1-q), q = e^{-pi a^2}.
struct MassBox {
    std::vector<long double> radius;
    long double tail = 0.0L;        // certified bound on the omitted mass
    long double box_points = 0.0L;  // upper bound on enumerated points
    double truncation_radius = 0.0;
};

MassBox certified_box(const EnumerationFrame& f, long double s, long double tol);

// Point sum_j k_j b_j of the frame's basis.
std::vector<long double> frame_point(const EnumerationFrame& f, const std::vector<long>& k);

}  // namespace clwe::lattice

#pragma once

#include "clwe/lattice/lattice.hpp"
#include "clwe/numerics/real.hpp"

#include <cstddef>

namespace clwe::numerics {

inline constexpr double kDefaultMassTolerance = 1e-12;
inline constexpr std::size_t kMassPointBudget = 5'000'000;

struct GaussianMassResult {
    Real mass;
    double truncation_radius = 0.0;  // every lattice point within this norm was summed
    double tail_bound = 0.0;         // certified |true mass - mass|, includes rounding
    std::size_t points = 0;
};

// rho_s(L) by box enumeration in the Gram-Schmidt frame of the reduced basis.
// The box half-widths K_j are chosen so that the 1-D tails
// 2 e^{-pi a^2 K^2} / (1 - e^{-pi a^2 (2K+1)}), a = |b*_j|/s, dominate the
// omitted mass once multiplied by the unrestricted level sums of the others.
GaussianMassResult gaussian_mass(const lattice::Lattice& lattice, const Real& s,
                                 double tol = kDefaultMassTolerance);

// rho_s(L + shift).
GaussianMassResult gaussian_mass_coset(const lattice::Lattice& lattice, const Vector<Real>& shift, const Real& s,
                                       double tol = kDefaultMassTolerance);

// |rho_s(L) - det(L*) s^n rho_{1/s}(L*)|, both sides enumerated independently;
// the dual side runs at tol / (det(L*) s^n) so the residual of exact sums is
// at most 2 tol.
Real poisson_residual(const lattice::Lattice& lattice, const Real& s, double tol = kDefaultMassTolerance);

}  // namespace clwe::numerics

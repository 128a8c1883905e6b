#pragma once

#include "clwe/lattice/lattice.hpp"

namespace clwe::lattice {

struct SmoothingBounds {
    double epsilon = 0.0;
    Real lower;         // sqrt(ln(1/eps)/pi) / lambda_1(L*)
    Real upper_dual;    // c sqrt(n) / lambda_1(L*) with eps = exp(-c^2 n)
    Real upper_primal;  // sqrt(ln(2n(1 + 1/eps))/pi) lambda_n(L)
    double c = 0.0;
    // The dual bound is only a theorem for c > 1/sqrt(2 pi).
    bool dual_bound_applies = false;
    // rho_{1/u}(L* \ {0}) <= eps, evaluated by theta summation at u = upper_dual
    // and u = upper_primal.
    bool dual_verified = false;
    bool primal_verified = false;
};

// Dimension <= 4 (successive minima by enumeration).
SmoothingBounds smoothing_bounds(const Lattice& lattice, double epsilon);

// rho_{1/s}(L* \ {0}) with certified tolerance tol.
double dual_tail_mass(const Lattice& lattice, double s, double tol);

// eta_eps(L) by bisection on s -> rho_{1/s}(L* \ {0}); relative accuracy rel_tol.
double smoothing_parameter(const Lattice& lattice, double epsilon, double rel_tol = 1e-9);

}  // namespace clwe::lattice

#pragma once

#include "clwe/lattice/lattice.hpp"

#include <vector>

namespace clwe::lattice {

struct NearestPlaneResult {
    Vector<Real> point;                 // lattice vector
    Vector<Real> offset;                // target - point
    Vector<Integer> coefficients;       // with respect to the reduced basis
};

// Babai's nearest-plane algorithm on the LLL-reduced basis.
NearestPlaneResult babai_nearest_plane(const Lattice& lattice, const Vector<Real>& target);

inline constexpr double kBruteForceBoxLimit = 1e7;

// Shortest nonzero vector among integer combinations of the given basis with
// coefficients in [-coeff_radius, coeff_radius]^n.
Vector<Real> shortest_vector_bruteforce(const Lattice& lattice, long coeff_radius);

// Closest lattice point among the same coefficient box.
Vector<Real> closest_vector_bruteforce(const Lattice& lattice, const Vector<Real>& target, long coeff_radius);

// lambda_1, ..., lambda_n by sphere enumeration of the reduced basis up to its
// longest vector, then greedy selection of independent vectors by norm.
std::vector<double> successive_minima(const Lattice& lattice);

}  // namespace clwe::lattice

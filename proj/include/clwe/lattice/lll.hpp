#pragma once

#include "clwe/numerics/matrix.hpp"
#include "clwe/numerics/real.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace clwe::lattice {

using Integer = boost::multiprecision::mpz_int;
using IntegerMatrix = Matrix<Integer>;

struct LllResult {
    Matrix<Real> reduced;     // columns are the reduced basis vectors
    IntegerMatrix transform;  // reduced = basis * transform, unimodular
    std::size_t swaps = 0;
};

inline constexpr double kDefaultLllDelta = 0.75;

// Textbook LLL on the columns of `basis` with floating Gram-Schmidt at the
// basis' working precision and exact integer transform tracking.
LllResult lll_reduce(const Matrix<Real>& basis, double delta = kDefaultLllDelta);

// Checks size reduction (|mu_ij| <= 1/2 + slack) and the Lovasz condition.
bool is_lll_reduced(const Matrix<Real>& basis, double delta = kDefaultLllDelta, double slack = 1e-9);

Integer integer_determinant(const IntegerMatrix& m);
Matrix<Real> to_real(const IntegerMatrix& m, unsigned bits);

}  // namespace clwe::lattice

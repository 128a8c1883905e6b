#pragma once

#include "clwe/numerics/matrix.hpp"
#include "clwe/numerics/real.hpp"

#include <span>

namespace clwe::numerics {

// Gaussian function with width s: exp(-pi |x/s|^2). D_{R^n,s} has covariance
// s^2/(2 pi) I_n; every sampler and density in this library is phrased in
// widths.
Real rho(const Vector<Real>& x, const Real& s);
double rho(std::span<const double> x, double s = 1.0);
double rho(double x, double s = 1.0);

// The one place a width is turned into a standard deviation.
double width_to_stddev(double s);

// sum_{k in Z} rho_s(x + k), evaluated either directly or via its Poisson dual
// depending on the width; relative accuracy ~1e-15.
double periodic_gaussian(double x, double s);

struct CompletedSquare {
    Real r0;
    Real r3;
    Vector<Real> c3;
};

// rho_{r1}(x - c1) rho_{r2}(x - c2) = rho_{r0}(c1 - c2) rho_{r3}(x - c3).
CompletedSquare complete_squares(const Real& r1, const Real& r2, const Vector<Real>& c1,
                                 const Vector<Real>& c2);

// Upper bound on the total variation distance between N(mu1, sigma1^2) and
// N(mu2, sigma2^2); sigma here is a standard deviation. May exceed 1.
Real gaussian_tv_bound(const Real& mu1, const Real& sigma1, const Real& mu2, const Real& sigma2);

struct SecondMomentSeries {
    Real primal;  // g((1/gamma)Z) / rho((1/gamma)Z)
    Real dual;    // g_hat(gamma Z) / rho(gamma Z)
};

// E[x^2] for x ~ D_{(1/gamma)Z} by both sides of Poisson summation.
SecondMomentSeries discrete_gaussian_second_moment_series(const Real& gamma, double tol = 1e-12);

// Checks that both series agree within 4 tol and returns the dual value.
Real discrete_gaussian_second_moment(const Real& gamma, double tol = 1e-12);

}  // namespace clwe::numerics

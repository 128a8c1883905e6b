#include "clwe/error.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/lattice/lattice.hpp"
#include "clwe/numerics/gaussian.hpp"
#include "clwe/numerics/quadrature.hpp"
#include "clwe/numerics/real.hpp"
#include "clwe/numerics/theta.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace clwe;
using namespace clwe::numerics;
using clwe::lattice::Lattice;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: plain double sum of exp(-pi a k^2) over |k| <= 40.
double theta_1d(double a) {
    double s = 0.0;
    for (int k = -40; k <= 40; ++k) s += std::exp(-kPi * a * k * k);
    return s;
}

Lattice random_lattice(std::size_t n, Rng& rng) {
    for (;;) {
        Matrix<double> b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = -2.0 + 4.0 * rng.uniform();
        if (std::fabs(determinant(b)) >= 0.25) return Lattice(b, kDefaultPrecisionBits);
    }
}

}  // namespace

TEST(Precision, MixedPrecisionPromotesToMax) {
    const Real a = make_real(1.0, 128);
    const Real b = make_real(3.0, 512);
    const Real c = a / b;
    EXPECT_GE(precision_bits(c), 512u);
    EXPECT_THROW(make_real(1.0, 32), ParameterError);
}

TEST(Precision, SolverPrecisionGrowsQuadratically) {
    EXPECT_EQ(solver_precision_bits(2), 256u);
    EXPECT_EQ(solver_precision_bits(8), 512u);
    EXPECT_EQ(solver_precision_bits(10), 800u);
}

TEST(Precision, DecimalRoundTrip) {
    const Real third = make_real(1.0, 300) / 3;
    const Real back = make_real(to_decimal_string(third), 300);
    EXPECT_LT(abs(back - third), pow(make_real(2.0, 300), -295));
}

TEST(Rho, ZeroVectorIsOne) {
    EXPECT_EQ(rho(Vector<Real>(5, make_real(0.0)), make_real(1.0)), 1);
    EXPECT_DOUBLE_EQ(rho(0.0), 1.0);
}

TEST(Rho, DefiningFormula) {
    EXPECT_NEAR(rho(1.0), 0.0432139182637722497744, 1e-17);
    const Vector<Real> x{make_real(1.0), make_real(1.0)};
    const Real r = rho(x, sqrt(make_real(2.0)));
    EXPECT_LT(abs(r - exp(-real_pi())), pow(make_real(2.0), -250));
}

TEST(Rho, NonpositiveWidthRejected) {
    EXPECT_THROW(rho(1.0, 0.0), ParameterError);
    EXPECT_THROW(rho(Vector<Real>{make_real(1.0)}, make_real(-1.0)), ParameterError);
}

TEST(Rho, SeparatesOverConcatenation) {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const double s = 0.5 + 2.0 * rng.uniform();
        std::vector<double> x{rng.normal(), rng.normal()}, y{rng.normal()};
        std::vector<double> xy{x[0], x[1], y[0]};
        EXPECT_NEAR(rho(x, s) * rho(y, s), rho(xy, s), 1e-15);
    }
}

TEST(Rho, WidthToStddev) { EXPECT_NEAR(width_to_stddev(1.0), 1.0 / std::sqrt(2.0 * kPi), 1e-16); }

TEST(PeriodicGaussian, DirectAndDualBranchesAgree) {
    for (double x : {0.0, 0.1, 0.37, 0.5, -0.2}) {
        double direct = 0.0;
        for (int k = -200; k <= 200; ++k) direct += rho(x + k, 1.3);
        EXPECT_NEAR(periodic_gaussian(x, 1.3), direct, 1e-13);
        double narrow = 0.0;
        for (int k = -20; k <= 20; ++k) narrow += rho(x + k, 0.4);
        EXPECT_NEAR(periodic_gaussian(x, 0.4), narrow, 1e-15);
    }
}

TEST(GaussianMass, IntegerLattice) {
    const auto r = gaussian_mass(Lattice::integer_lattice(1), make_real(1.0), 1e-12);
    EXPECT_NEAR(to_double(r.mass), 1.08643481121330801457, 1e-13);
    EXPECT_LT(r.tail_bound, 1e-12);
    EXPECT_GE(r.mass, 1);
}

TEST(GaussianMass, EvenIntegers) {
    const auto r = gaussian_mass(Lattice::scaled_integer_lattice(1, make_real(2.0)), make_real(1.0), 1e-12);
    EXPECT_NEAR(to_double(r.mass), theta_1d(4.0), 1e-14);
    EXPECT_NEAR(to_double(r.mass), 1.00000697468471241799, 1e-14);
}

TEST(GaussianMass, FactorizesOverOrthogonalSum) {
    const auto r1 = gaussian_mass(Lattice::integer_lattice(1), make_real(1.0), 1e-13);
    const auto r2 = gaussian_mass(Lattice::integer_lattice(2), make_real(1.0), 1e-13);
    EXPECT_NEAR(to_double(r2.mass), to_double(r1.mass * r1.mass), 1e-12);
}

TEST(GaussianMass, MatchesDirectOracleOnSkewedBasis) {
    // Basis (1, 0), (0.5, 2): brute force over a generous coefficient box.
    const Lattice l(Matrix<double>{{1.0, 0.5}, {0.0, 2.0}}, 256);
    double oracle = 0.0;
    for (int a = -30; a <= 30; ++a)
        for (int b = -30; b <= 30; ++b) {
            const double x = a + 0.5 * b, y = 2.0 * b;
            oracle += std::exp(-kPi * (x * x + y * y) / 1.44);
        }
    const auto r = gaussian_mass(l, make_real(1.2), 1e-12);
    EXPECT_NEAR(to_double(r.mass), oracle, 1e-12);
}

TEST(GaussianMass, CosetShift) {
    // rho(Z + 1/2) = 2 sum_{k >= 0} exp(-pi (k + 1/2)^2).
    double oracle = 0.0;
    for (int k = -40; k <= 40; ++k) oracle += std::exp(-kPi * (k + 0.5) * (k + 0.5));
    const auto r = gaussian_mass_coset(Lattice::integer_lattice(1), {make_real(0.5)}, make_real(1.0), 1e-12);
    EXPECT_NEAR(to_double(r.mass), oracle, 1e-13);
}

TEST(GaussianMass, NondecreasingInWidth) {
    Rng rng(5);
    const Lattice l2 = random_lattice(2, rng);
    const Lattice l1 = Lattice::scaled_integer_lattice(1, make_real(0.7));
    double prev1 = 0.0, prev2 = 0.0;
    for (double s = 0.2; s <= 3.0; s += 0.1) {
        const double m1 = to_double(gaussian_mass(l1, make_real(s)).mass);
        const double m2 = to_double(gaussian_mass(l2, make_real(s)).mass);
        EXPECT_GE(m1, prev1);
        EXPECT_GE(m2, prev2);
        prev1 = m1;
        prev2 = m2;
    }
}

TEST(GaussianMass, UnreachableToleranceReported) {
    EXPECT_THROW(gaussian_mass(Lattice::integer_lattice(4), make_real(40.0), 1e-12), ToleranceError);
    EXPECT_THROW(gaussian_mass(Lattice::integer_lattice(1), make_real(1.0), 0.0), ParameterError);
}

TEST(PoissonResidual, SelfDualIntegerLattice) {
    for (std::size_t n = 1; n <= 3; ++n) {
        EXPECT_LE(to_double(poisson_residual(Lattice::integer_lattice(n), make_real(1.0), 1e-12)), 2e-12);
    }
}

TEST(PoissonResidual, HalfIntegers) {
    const Lattice half = Lattice::scaled_integer_lattice(1, make_real(0.5));
    EXPECT_LE(to_double(poisson_residual(half, make_real(1.0), 1e-12)), 2e-12);
}

TEST(PoissonResidual, RandomLatticesProperty) {
    Rng rng(2024);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int t = 0; t < 100; ++t) {
            const Lattice l = random_lattice(n, rng);
            const double res = to_double(poisson_residual(l, make_real(1.0), 1e-12));
            ASSERT_LE(res, 2e-12) << "n=" << n << " trial " << t;
        }
    }
}

TEST(CompleteSquares, SymmetricCase) {
    const Vector<Real> zero{make_real(0.0), make_real(0.0)};
    const auto cs = complete_squares(make_real(1.0), make_real(1.0), zero, zero);
    EXPECT_NEAR(to_double(cs.r0), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(to_double(cs.r3), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(cs.c3[0], 0);
}

TEST(CompleteSquares, ThreeFourFive) {
    const auto cs = complete_squares(make_real(3.0), make_real(4.0), {make_real(1.0)}, {make_real(0.0)});
    EXPECT_LT(abs(cs.r0 - 5), pow(make_real(2.0), -250));
    EXPECT_LT(abs(cs.r3 - make_real(12.0) / 5), pow(make_real(2.0), -250));
    // (r3/r1)^2 = (12/15)^2 = 0.64.
    EXPECT_LT(abs(cs.c3[0] - make_real("0.64")), pow(make_real(2.0), -250));
}

TEST(CompleteSquares, IdentityHoldsPointwise) {
    Rng rng(99);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 3;
        const Real r1 = make_real(0.2 + 3.0 * rng.uniform());
        const Real r2 = make_real(0.2 + 3.0 * rng.uniform());
        Vector<Real> c1(n), c2(n), x(n);
        for (std::size_t i = 0; i < n; ++i) {
            c1[i] = make_real(rng.normal());
            c2[i] = make_real(rng.normal());
            x[i] = make_real(rng.normal());
        }
        const auto cs = complete_squares(r1, r2, c1, c2);
        const Real lhs = rho(x - c1, r1) * rho(x - c2, r2);
        const Real rhs = rho(c1 - c2, cs.r0) * rho(x - cs.c3, cs.r3);
        EXPECT_LE(abs(lhs - rhs), pow(make_real(2.0), -128));
    }
}

TEST(CompleteSquares, RejectsBadInput) {
    EXPECT_THROW(complete_squares(make_real(0.0), make_real(1.0), {make_real(0.0)}, {make_real(0.0)}), ParameterError);
    EXPECT_THROW(complete_squares(make_real(1.0), make_real(1.0), {make_real(0.0)}, {}), ParameterError);
}

TEST(GaussianTvBound, Examples) {
    const Real one = make_real(1.0), zero = make_real(0.0);
    EXPECT_EQ(gaussian_tv_bound(zero, one, zero, one), 0);
    EXPECT_NEAR(to_double(gaussian_tv_bound(zero, one, one, one)), 0.5, 1e-15);
    EXPECT_NEAR(to_double(gaussian_tv_bound(zero, one, zero, make_real(2.0))), 9.0 / 8.0, 1e-15);
    EXPECT_THROW(gaussian_tv_bound(zero, zero, zero, one), ParameterError);
}

TEST(GaussianTvBound, DominatesQuadratureTv) {
    // Closed form: the densities cross at a = sqrt(8 ln 2 / 3), so
    // TV = erf(a/sqrt 2) - erf(a/(2 sqrt 2)) = 0.3226745688347687.
    auto pdf = [](double x, double sd) { return std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2.0 * kPi)); };
    const auto q = simpson([&](double x) { return 0.5 * std::fabs(pdf(x, 1.0) - pdf(x, 2.0)); }, -20.0, 20.0, 1e-10);
    const double a = std::sqrt(8.0 * std::log(2.0) / 3.0);
    const double exact = std::erf(a / std::sqrt(2.0)) - std::erf(a / (2.0 * std::sqrt(2.0)));
    EXPECT_NEAR(exact, 0.322674568834768665, 1e-15);
    EXPECT_NEAR(q.value, exact, 1e-9);
    const Real one = make_real(1.0), zero = make_real(0.0);
    EXPECT_GE(to_double(gaussian_tv_bound(zero, one, zero, make_real(2.0))), q.value);
}

TEST(Simpson, PolynomialsAndNonconvergence) {
    const auto r = simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12);
    EXPECT_NEAR(r.value, 4.0, 1e-12);
    EXPECT_THROW(simpson([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-14, 4, 3), ToleranceError);
}

TEST(SecondMoment, GammaOneMatchesTruncatedSum) {
    // Oracle: sum_{|k| <= 12} k^2 e^{-pi k^2} / sum_{|k| <= 12} e^{-pi k^2}.
    double num = 0.0, den = 0.0;
    for (int k = -12; k <= 12; ++k) {
        num += k * k * std::exp(-kPi * k * k);
        den += std::exp(-kPi * k * k);
    }
    const Real m = discrete_gaussian_second_moment(make_real(1.0));
    EXPECT_NEAR(to_double(m), num / den, 1e-15);
    EXPECT_NEAR(to_double(m), 0.0795774715459476678844, 1e-15);
}

TEST(SecondMoment, FrozenValues) {
    EXPECT_NEAR(to_double(discrete_gaussian_second_moment(make_real(1.5))), 0.155329983973522361620760, 1e-15);
    EXPECT_NEAR(to_double(discrete_gaussian_second_moment(make_real(2.0))), 0.159127044547629213991853, 1e-15);
}

TEST(SecondMoment, LargeGammaApproachesContinuous) {
    const Real m = discrete_gaussian_second_moment(make_real(8.0));
    EXPECT_LT(abs(m - 1 / (2 * real_pi())), exp(make_real(-50.0)));
}

TEST(SecondMoment, GapAtLeastLowerBound) {
    for (double g : {1.0, 1.5, 2.0}) {
        const Real m = discrete_gaussian_second_moment(make_real(g));
        const double gap = to_double(abs(m - 1 / (2 * real_pi())));
        EXPECT_GE(gap, g * g * std::exp(-kPi * g * g)) << "gamma " << g;
    }
}

TEST(SecondMoment, PrimalAndDualSeriesAgree) {
    for (double g : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0}) {
        const auto s = discrete_gaussian_second_moment_series(make_real(g), 1e-12);
        EXPECT_LE(to_double(abs(s.primal - s.dual)), 4e-12) << "gamma " << g;
    }
    EXPECT_THROW(discrete_gaussian_second_moment(make_real(0.5)), ParameterError);
}

#include "clwe/lattice/smoothing.hpp"

#include "clwe/error.hpp"
#include "clwe/lattice/cvp.hpp"
#include "clwe/numerics/theta.hpp"

#include <cmath>
#include <numbers>

namespace clwe::lattice {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("smoothing: epsilon must lie in (0, 1)");
}

double tail_tolerance(double epsilon) { return std::max(epsilon * 1e-6, 1e-300); }

double dual_tail_of(const Lattice& dual_lattice, double s, double tol) {
    const auto r = numerics::gaussian_mass(dual_lattice, make_real(1.0 / s, dual_lattice.precision()), tol);
    return std::max(0.0, (r.mass - 1).convert_to<double>());
}

}  // namespace

double dual_tail_mass(const Lattice& lattice, double s, double tol) {
    if (!(s > 0.0)) throw ParameterError("smoothing: width must be positive");
    return dual_tail_of(dual(lattice), s, tol);
}

SmoothingBounds smoothing_bounds(const Lattice& lattice, double epsilon) {
    check_epsilon(epsilon);
    const std::size_t n = lattice.dimension();
    if (n > 4) throw ParameterError("smoothing bounds: dimension must be at most 4");
    const Lattice d = dual(lattice);
    const double lambda1_dual = successive_minima(d).front();
    const double lambda_n = successive_minima(lattice).back();
    const unsigned bits = lattice.precision();
    PrecisionScope scope(bits);

    const double log_inv = std::log(1.0 / epsilon);
    SmoothingBounds out;
    out.epsilon = epsilon;
    out.c = std::sqrt(log_inv / static_cast<double>(n));
    out.dual_bound_applies = out.c > 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const Real pi = real_pi(bits);
    const Real l1 = make_real(lambda1_dual, bits);
    out.lower = sqrt(make_real(log_inv, bits) / pi) / l1;
    out.upper_dual = make_real(out.c, bits) * sqrt(make_real(static_cast<double>(n), bits)) / l1;
    out.upper_primal = sqrt(log(make_real(2.0 * static_cast<double>(n), bits) * (1 + 1 / make_real(epsilon, bits))) / pi) *
                       make_real(lambda_n, bits);

    const double tol = tail_tolerance(epsilon);
    out.dual_verified = dual_tail_of(d, out.upper_dual.convert_to<double>(), tol) <= epsilon;
    out.primal_verified = dual_tail_of(d, out.upper_primal.convert_to<double>(), tol) <= epsilon;
    return out;
}

double smoothing_parameter(const Lattice& lattice, double epsilon, double rel_tol) {
    check_epsilon(epsilon);
    const Lattice d = dual(lattice);
    const double tol = tail_tolerance(epsilon);
    const double lambda1_dual = successive_minima(d).front();
    // Below the lower bound the tail exceeds eps; grow hi until it does not.
    double lo = std::sqrt(std::log(1.0 / epsilon) / std::numbers::pi) / lambda1_dual * 0.999;
    double hi = lo * 2.0;
    while (dual_tail_of(d, hi, tol) > epsilon) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (dual_tail_of(d, mid, tol) > epsilon ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace clwe::lattice

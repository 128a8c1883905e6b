#include "clwe/numerics/theta.hpp"

#include "clwe/error.hpp"
#include "clwe/lattice/enumerate.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace clwe::numerics {

namespace {

GaussianMassResult mass_impl(const lattice::Lattice& lattice, const std::vector<long double>& shift, const Real& s,
                             double tol) {
    if (!(s > 0)) throw ParameterError("gaussian mass: width must be positive");
    if (!(tol > 0.0)) throw ParameterError("gaussian mass: tolerance must be positive");
    const auto frame = lattice::reduced_frame(lattice);
    const long double pi = std::numbers::pi_v<long double>;
    const long double sd = s.convert_to<long double>();
    const long double s2 = sd * sd;
    const auto box = lattice::certified_box(frame, sd, static_cast<long double>(tol));
    if (box.box_points > static_cast<long double>(kMassPointBudget)) {
        throw ToleranceError("gaussian mass: tolerance needs more than the enumeration budget");
    }
    const auto& radius = box.radius;

    // Neumaier-compensated sum.
    long double sum = 0.0L, comp = 0.0L;
    const std::size_t points =
        lattice::enumerate_box(frame, shift, radius, kMassPointBudget, [&](const std::vector<long>&, long double r2) {
            const long double term = std::exp(-pi * r2 / s2);
            const long double t = sum + term;
            comp += std::fabs(sum) >= term ? (sum - t) + term : (term - t) + sum;
            sum = t;
        });
    sum += comp;

    const long double eps = std::numeric_limits<long double>::epsilon();
    const long double rounding = sum * 256.0L * eps;
    const long double certified = box.tail + rounding;
    if (!(certified < static_cast<long double>(tol))) {
        throw ToleranceError("gaussian mass: tolerance unreachable at extended precision");
    }
    GaussianMassResult out;
    const unsigned bits = std::max(precision_bits(s), kDefaultPrecisionBits);
    out.mass = from_long_double(sum, bits);
    out.truncation_radius = box.truncation_radius;
    out.tail_bound = static_cast<double>(certified);
    out.points = points;
    return out;
}

}  // namespace

GaussianMassResult gaussian_mass(const lattice::Lattice& lattice, const Real& s, double tol) {
    return mass_impl(lattice, std::vector<long double>(lattice.dimension(), 0.0L), s, tol);
}

GaussianMassResult gaussian_mass_coset(const lattice::Lattice& lattice, const Vector<Real>& shift, const Real& s,
                                       double tol) {
    const auto frame = lattice::reduced_frame(lattice);
    return mass_impl(lattice, lattice::gram_schmidt_coordinates(frame, shift), s, tol);
}

Real poisson_residual(const lattice::Lattice& lattice, const Real& s, double tol) {
    const unsigned bits = std::max(precision_bits(s), lattice.precision());
    PrecisionScope scope(bits);
    const auto primal = gaussian_mass(lattice, s, tol);
    const lattice::Lattice d = lattice::dual(lattice);
    const Real det_dual = 1 / lattice.determinant();
    const Real scale = det_dual * pow(s, static_cast<long>(lattice.dimension()));
    const double dual_tol = tol / scale.convert_to<double>();
    const auto dual_side = gaussian_mass(d, 1 / s, dual_tol);
    return abs(primal.mass - scale * dual_side.mass);
}

}  // namespace clwe::numerics

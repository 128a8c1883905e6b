#include "clwe/lattice/discrete_gaussian.hpp"

#include "clwe/error.hpp"
#include "clwe/lattice/cvp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace clwe::lattice {

namespace {

// Geometric on {0, 1, ...} with Pr[m] = (1 - q) q^m, by inversion.
long geometric(double log_q, Rng& rng) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    return static_cast<long>(std::floor(std::log(u) / log_q));
}

}  // namespace

long sample_integer_gaussian(double centre, double r, Rng& rng) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("integer Gaussian: width must be positive");
    if (!std::isfinite(centre)) throw ParameterError("integer Gaussian: centre must be finite");
    const double pi = std::numbers::pi;
    const double lambda = std::sqrt(2.0 * pi) / r;
    const double base = std::ceil(centre);
    // Right branch k = base + m at distance xr + m, left branch
    // k = base - 1 - m at distance xl + m.
    const double xr = base - centre;
    const double xl = 1.0 - xr;
    auto h = [&](double x) { return -pi * x * x / (r * r) + lambda * x; };
    const double xstar = lambda * r * r / (2.0 * pi);
    double log_m = -INFINITY;
    for (double x0 : {xr, xl}) {
        const double m = std::max(0.0, xstar - x0);
        log_m = std::max({log_m, h(x0 + std::floor(m)), h(x0 + std::ceil(m))});
    }
    const double p_right = 1.0 / (1.0 + std::exp(-lambda * (xl - xr)));
    for (;;) {
        const bool right = rng.uniform() < p_right;
        const long m = geometric(-lambda, rng);
        const double x = (right ? xr : xl) + static_cast<double>(m);
        const double log_accept = h(x) - log_m;
        if (std::log(1.0 - rng.uniform()) <= log_accept) {
            return right ? static_cast<long>(base) + m : static_cast<long>(base) - 1 - m;
        }
    }
}

DiscreteGaussianSampler::DiscreteGaussianSampler(DiscreteGaussianSpec spec) : spec_(std::move(spec)) {
    const std::size_t n = spec_.lattice.dimension();
    if (!(spec_.width > 0)) throw ParameterError("discrete Gaussian: width must be positive");
    if (spec_.coset_shift.empty()) spec_.coset_shift.assign(n, make_real(0.0, spec_.lattice.precision()));
    if (spec_.coset_shift.size() != n) throw ParameterError("discrete Gaussian: shift has wrong dimension");
    frame_ = reduced_frame(spec_.lattice);
    shift_gs_ = gram_schmidt_coordinates(frame_, spec_.coset_shift);
    const long double r = spec_.width.convert_to<long double>();
    const long double pi = std::numbers::pi_v<long double>;

    if (spec_.mode == DiscreteGaussianMode::randomized_nearest_plane) {
        const double factor =
            std::sqrt(std::log(2.0 * static_cast<double>(n) * (1.0 + 1.0 / kNearestPlaneEpsilon)) / std::numbers::pi);
        for (std::size_t j = 0; j < n; ++j) {
            if (r < factor * std::sqrt(frame_.bstar_norm2[j])) {
                throw PreconditionError("randomized nearest plane: width below sqrt(ln(2n(1+1/eps))/pi) max |b*_i|");
            }
        }
        return;
    }

    if (n > 3) throw ParameterError("exact discrete Gaussian: dimension must be at most 3");
    // rho at the nearest-plane point of the coset lower-bounds the total mass.
    Vector<Real> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -spec_.coset_shift[i];
    const auto np = babai_nearest_plane(spec_.lattice, neg);
    long double d2 = 0.0L;
    for (const auto& v : np.offset) d2 += v.convert_to<long double>() * v.convert_to<long double>();
    const long double lower = std::exp(-pi * d2 / (r * r));
    const auto box = certified_box(frame_, r, 2.0L * kExactExcludedMass * lower);
    if (box.box_points > 64.0L * kExactCandidateLimit) {
        throw BudgetError("exact discrete Gaussian: candidate box exceeds the limit");
    }
    std::vector<long double> weights;
    enumerate_box(frame_, shift_gs_, box.radius, kExactCandidateLimit, [&](const std::vector<long>& k, long double q) {
        coeffs_.push_back(k);
        weights.push_back(std::exp(-pi * q / (r * r)));
    });
    long double total = 0.0L;
    for (long double w : weights) total += w;
    mass_ = static_cast<double>(total);
    cdf_.resize(weights.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cdf_[i] = static_cast<double>(acc / total);
    }
    cdf_.back() = 1.0;
}

double DiscreteGaussianSampler::probability(std::size_t i) const {
    if (i >= cdf_.size()) throw ParameterError("discrete Gaussian: candidate index out of range");
    return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

Vector<Real> DiscreteGaussianSampler::candidate(std::size_t i) const {
    if (i >= coeffs_.size()) throw ParameterError("discrete Gaussian: candidate index out of range");
    return point_from(coeffs_[i]);
}

Vector<Real> DiscreteGaussianSampler::point_from(const std::vector<long>& k) const {
    const auto& b = spec_.lattice.reduced_basis();
    const unsigned bits = spec_.lattice.precision();
    PrecisionScope scope(bits);
    Vector<Real> p = spec_.coset_shift;
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] == 0) continue;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += k[j] * b(i, j);
    }
    return p;
}

Vector<Real> DiscreteGaussianSampler::sample(Rng& rng) const {
    std::vector<long> k;
    return sample(rng, k);
}

Vector<Real> DiscreteGaussianSampler::sample(Rng& rng, std::vector<long>& k) const {
    if (spec_.mode == DiscreteGaussianMode::exact_enumeration) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        k = coeffs_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1))];
        return point_from(k);
    }
    const std::size_t n = frame_.n;
    const double r = spec_.width.convert_to<double>();
    k.assign(n, 0);
    for (std::size_t j = n; j-- > 0;) {
        long double c = shift_gs_[j];
        for (std::size_t i = j + 1; i < n; ++i) c += frame_.mu(i, j) * static_cast<long double>(k[i]);
        const double width = r / static_cast<double>(std::sqrt(frame_.bstar_norm2[j]));
        k[j] = sample_integer_gaussian(static_cast<double>(-c), width, rng);
    }
    return point_from(k);
}

Vector<Real> sample_discrete_gaussian(const DiscreteGaussianSpec& spec, Rng& rng) {
    return DiscreteGaussianSampler(spec).sample(rng);
}

}  // namespace clwe::lattice

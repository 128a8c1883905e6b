#pragma once

#include "clwe/harness/rng.hpp"
#include "clwe/lattice/enumerate.hpp"
#include "clwe/lattice/lattice.hpp"

#include <memory>
#include <vector>

namespace clwe::lattice {

// k ~ D_{Z, r} shifted to centre: Pr[k] proportional to rho_r(k - centre).
// Exact rejection from the integer Laplace proposal exp(-lambda |k - centre|),
// lambda = sqrt(2 pi)/r, with the acceptance bound taken as the maximum of
// the ratio over the integers.
long sample_integer_gaussian(double centre, double r, Rng& rng);

enum class DiscreteGaussianMode { exact_enumeration, randomized_nearest_plane };

struct DiscreteGaussianSpec {
    Lattice lattice;
    Vector<Real> coset_shift;  // samples live in coset_shift + L; empty means 0
    Real width;
    DiscreteGaussianMode mode = DiscreteGaussianMode::exact_enumeration;
};

inline constexpr std::size_t kExactCandidateLimit = 1'000'000;
inline constexpr double kExactExcludedMass = 1e-12;
// Randomized nearest plane needs r / |b*_i| >= sqrt(ln(2n(1 + 1/eps))/pi) at
// this eps for every i.
inline constexpr double kNearestPlaneEpsilon = 1e-12;

// Sampler for D_{c + L, r}. Exact mode enumerates the candidate set once
// (dimension <= 3, at most 1e6 points, excluded mass < 1e-12 of the total)
// and samples by inverse CDF.
class DiscreteGaussianSampler {
public:
    explicit DiscreteGaussianSampler(DiscreteGaussianSpec spec);

    Vector<Real> sample(Rng& rng) const;
    // Same as sample() but also returns the reduced-basis coefficients.
    Vector<Real> sample(Rng& rng, std::vector<long>& coefficients) const;

    const DiscreteGaussianSpec& spec() const { return spec_; }
    std::size_t candidate_count() const { return coeffs_.size(); }
    // Probability of candidate i and its point, exact mode only.
    double probability(std::size_t i) const;
    Vector<Real> candidate(std::size_t i) const;
    // Total rho_r mass of the candidate set.
    double candidate_mass() const { return mass_; }

private:
    Vector<Real> point_from(const std::vector<long>& k) const;

    DiscreteGaussianSpec spec_;
    EnumerationFrame frame_;
    std::vector<long double> shift_gs_;
    std::vector<std::vector<long>> coeffs_;
    std::vector<double> cdf_;
    double mass_ = 0.0;
};

Vector<Real> sample_discrete_gaussian(const DiscreteGaussianSpec& spec, Rng& rng);

}  // namespace clwe::lattice

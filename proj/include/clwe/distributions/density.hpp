#pragma once

#include "clwe/distributions/params.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

#include <span>
#include <vector>

namespace clwe::distributions {

// Z = integral of rho(y) sum_k rho_beta(k - gamma <y, w>) over R^n
//   = beta / sqrt(beta^2 + gamma^2) * rho_{sqrt(beta^2 + gamma^2)}(Z).
// rho integrates to 1 over R^n, so Z alone normalizes the hCLWE density.
Real hclwe_normalizer(double beta, double gamma, unsigned bits = kDefaultPrecisionBits);

// Density ratio a(t) = H(t)/D(t) along the hidden axis,
// (1/Z) sum_k rho_beta(k - gamma t).
double hclwe_density_ratio(double t, double beta, double gamma);

// Marginal density rho(t) a(t) of <y, w> under H_{w, beta, gamma}.
double hclwe_marginal(double t, double beta, double gamma);

// Normalized hCLWE density at y with the layer sum cut to |k| <= k_trunc.
// Throws ToleranceError if the omitted terms can exceed 1e-12 of the sum.
Real hclwe_density(std::span<const double> y, const ClweParams& params, const HiddenDirection& w, long k_trunc,
                   unsigned bits = 128);
// Picks the smallest sufficient k_trunc.
Real hclwe_density(std::span<const double> y, const ClweParams& params, const HiddenDirection& w);

// Smallest K with the layer-sum tail beyond |k| <= K under 1e-12 of the sum.
long hclwe_layer_cutoff(double t, double beta, double gamma);

inline constexpr double kLayerTailFraction = 1e-12;

// H^(k): hCLWE conditioned on its central 2k+1 layers.
struct TruncatedMixture {
    long k = 0;
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<double> weights;  // layer j = -k..k at index j + k
    std::vector<double> means;    // along w
    double width = 0.0;           // common layer width along w
    double tv_bound = 0.0;        // 2 exp(-pi k^2 / (beta^2 + gamma^2))

    // Density of <y, w>; the orthogonal complement is D_{R^{n-1}} as in H.
    double marginal(double t) const;
};

TruncatedMixture truncate_hclwe(const ClweParams& params, long k);
nlohmann::json to_json(const TruncatedMixture& m);

}  // namespace clwe::distributions

#pragma once

#include "clwe/harness/rng.hpp"
#include "clwe/lattice/lattice.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

#include <vector>

namespace clwe::solvers {

// Pairwise correlation chi_D(H_v, H_w) with alpha = |<v, w>|. L1, L2 have
// bases
//   B1 = I / g,   B2 = (1/g) [[1, 0], [-alpha gamma^2 / (zeta g), g / zeta]],
// g = sqrt(beta^2 + gamma^2), zeta = sqrt(g^2 - alpha^2 gamma^4 / g^2).
struct SqCorrParams {
    double alpha = 0.0;
    double beta = 0.1;
    double gamma = 1.0;

    // alpha in [0, 1], beta in (0, 1), gamma >= 1.
    void validate() const;
    Real zeta(unsigned bits = kDefaultPrecisionBits) const;
    lattice::Lattice l1(unsigned bits = kDefaultPrecisionBits) const;
    lattice::Lattice l2(unsigned bits = kDefaultPrecisionBits) const;
};

struct SqCorrResult {
    Real chi;  // rho(L2*) / rho(L1*) - 1
    double tail_bound = 0.0;
    // alpha < 1: 8 exp(-pi gamma^2 (1 - alpha^2)), meaningful when gamma^2 (1 - alpha^2) >= 1.
    // alpha = 1: 2 (gamma/beta)^2, a bound on chi + 1.
    double bound = 0.0;
    bool same_direction = false;
    // alpha = 1 only: (gamma/beta)^2 rho((gamma/beta) L2*) / rho(L1*), the intermediate upper bound on chi + 1.
    double same_direction_bound = 0.0;
};

SqCorrResult sq_corr_closed_form(const SqCorrParams& p, double tol = 1e-15);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Average of a(<x, w>) a(<x, v>) - 1 over x ~ D_{R^n}; N >= 1e4.
MonteCarloEstimate sq_corr_monte_carlo(const std::vector<double>& v, const std::vector<double>& w, double beta,
                                       double gamma, std::size_t samples, Rng& rng);

struct Packing {
    std::vector<std::vector<double>> vectors;
    std::size_t attempts = 0;
    bool complete = false;  // target size reached within the budget
};

// Greedy rejection packing: keep a fresh uniform unit vector when
// |<u, u'>| <= alpha_max against every kept u'.
Packing generate_packing(std::size_t n, double alpha_max, std::size_t target_size, Rng& rng,
                         std::size_t max_attempts = 1'000'000);

double max_pairwise_inner_product(const std::vector<std::vector<double>>& vectors);

struct SqBoundParams {
    double tau = 0.0;
    double eta = 0.5;
    std::size_t packing_size = 0;
    double delta_corr = 0.0;
    double eps_corr = 0.0;

    // delta_corr = 2 (gamma/beta)^2, eps_corr = 8 exp(-pi gamma^2 / 2) (alpha = 1/sqrt 2).
    static SqBoundParams for_packing(double beta, double gamma, double tau, double eta, std::size_t packing_size);
    // tau >= sqrt(2 eps_corr) up to 1e-12 relative; eta in [1/2, 1].
    void validate() const;
};

// (2 eta - 1) |U| tau^2 / (2 delta_corr).
Real sq_query_lower_bound(const SqBoundParams& p);

nlohmann::json to_json(const SqCorrResult& r);
nlohmann::json to_json(const MonteCarloEstimate& r);
nlohmann::json to_json(const SqBoundParams& p);

}  // namespace clwe::solvers

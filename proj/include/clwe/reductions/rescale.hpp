#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/harness/rng.hpp"

namespace clwe::reductions {

struct RescaledBatch {
    distributions::SampleBatch batch;
    double beta_tilde = 0.0;   // gamma_tilde (beta / gamma)
    double gamma_tilde = 0.0;  // gamma / sqrt(1 + (beta/gamma)^2)
};

// Adds D_{R^n, beta/gamma} noise to samples of H_{w, gamma} and rescales by
// gamma / sqrt(beta^2 + gamma^2); the result follows H_{w, beta_tilde, gamma_tilde}.
distributions::HClweSample add_noise_rescale(const distributions::HClweSample& s, double gamma, double beta,
                                             Rng& rng);
RescaledBatch add_noise_rescale(const distributions::SampleBatch& noiseless, double beta, Rng& rng);

// (beta_tilde, gamma_tilde) for given (beta, gamma).
std::pair<double, double> rescaled_params(double beta, double gamma);

}  // namespace clwe::reductions

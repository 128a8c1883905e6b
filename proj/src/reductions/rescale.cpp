#include "clwe/reductions/rescale.hpp"

#include "clwe/error.hpp"

#include <cmath>

namespace clwe::reductions {

std::pair<double, double> rescaled_params(double beta, double gamma) {
    if (!(gamma > 0.0)) throw ParameterError("rescale: gamma must be > 0");
    if (!(beta >= 0.0)) throw ParameterError("rescale: beta must be >= 0");
    const double ratio = beta / gamma;
    const double gamma_tilde = gamma / std::sqrt(1.0 + ratio * ratio);
    return {gamma_tilde * ratio, gamma_tilde};
}

distributions::HClweSample add_noise_rescale(const distributions::HClweSample& s, double gamma, double beta,
                                             Rng& rng) {
    if (!(beta > 0.0)) throw ParameterError("rescale: beta must be > 0");
    rescaled_params(beta, gamma);
    const double noise = beta / gamma;
    const double scale = gamma / std::hypot(beta, gamma);
    distributions::HClweSample out{s.y};
    for (auto& x : out.y) x = (x + rng.gaussian(noise)) * scale;
    return out;
}

RescaledBatch add_noise_rescale(const distributions::SampleBatch& noiseless, double beta, Rng& rng) {
    const double gamma = noiseless.metadata().gamma;
    if (noiseless.metadata().beta != 0.0) throw ParameterError("rescale: input batch must be noiseless");
    const auto [bt, gt] = rescaled_params(beta, gamma);
    auto meta = noiseless.metadata();
    meta.beta = bt;
    meta.gamma = gt;
    meta.generator += "+rescale";
    distributions::SampleBatch out(std::move(meta), false);
    out.reserve(noiseless.size());
    for (std::size_t i = 0; i < noiseless.size(); ++i) {
        const auto row = noiseless.y(i);
        out.append(add_noise_rescale({std::vector<double>(row.begin(), row.end())}, gamma, beta, rng).y);
    }
    out.seal();
    return {std::move(out), bt, gt};
}

}  // namespace clwe::reductions

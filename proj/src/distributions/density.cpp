#include "clwe/distributions/density.hpp"

#include "clwe/error.hpp"
#include "clwe/numerics/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace clwe::distributions {

namespace {

void check_beta_gamma(double beta, double gamma) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("hCLWE density: beta must be > 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("hCLWE density: gamma must be > 0");
}

// log of an upper bound on sum_{|k| > K} rho_beta(k - x), x the layer
// coordinate; +inf when K does not clear |x|.
double log_layer_tail(double x, double beta, long K) {
    const double d0 = static_cast<double>(K) + 1.0 - std::abs(x);
    if (d0 <= 0.0) return std::numeric_limits<double>::infinity();
    const double a = std::numbers::pi / (beta * beta);
    // Both one-sided tails are at most e^{-a d0^2}/(1 - e^{-2 a d0}).
    return std::log(2.0) - a * d0 * d0 - std::log1p(-std::exp(-2.0 * a * d0));
}

// log of the largest single term, a lower bound on the full layer sum.
double log_layer_peak(double x, double beta) {
    const double d = x - std::round(x);
    return -std::numbers::pi * d * d / (beta * beta);
}

bool tail_negligible(double x, double beta, long K) {
    return log_layer_tail(x, beta, K) <= std::log(kLayerTailFraction) + log_layer_peak(x, beta);
}

double layer_normalizer(double beta, double gamma) {
    const double scale = std::hypot(beta, gamma);
    return beta / scale * numerics::periodic_gaussian(0.0, scale);
}

}  // namespace

Real hclwe_normalizer(double beta, double gamma, unsigned bits) {
    check_beta_gamma(beta, gamma);
    PrecisionScope scope(bits);
    const Real b = make_real(beta, bits);
    const Real g = make_real(gamma, bits);
    const Real scale2 = b * b + g * g;
    const Real pi = real_pi(bits);
    const Real cutoff = pow(make_real(2.0, bits), -static_cast<int>(bits) - 16);
    Real theta = make_real(1.0, bits);
    for (long k = 1;; ++k) {
        const Real term = exp(-pi * k * k / scale2);
        theta += 2 * term;
        if (term < cutoff) break;
    }
    return b / sqrt(scale2) * theta;
}

double hclwe_density_ratio(double t, double beta, double gamma) {
    check_beta_gamma(beta, gamma);
    return numerics::periodic_gaussian(gamma * t, beta) / layer_normalizer(beta, gamma);
}

double hclwe_marginal(double t, double beta, double gamma) {
    return numerics::rho(t) * hclwe_density_ratio(t, beta, gamma);
}

long hclwe_layer_cutoff(double t, double beta, double gamma) {
    check_beta_gamma(beta, gamma);
    const double x = gamma * t;
    long K = static_cast<long>(std::ceil(std::abs(x)));
    while (!tail_negligible(x, beta, K)) ++K;
    return K;
}

Real hclwe_density(std::span<const double> y, const ClweParams& params, const HiddenDirection& w, long k_trunc,
                   unsigned bits) {
    check_beta_gamma(params.beta, params.gamma);
    if (y.size() != params.n || w.dimension() != params.n)
        throw ParameterError("hclwe_density: dimension mismatch");
    PrecisionScope scope(bits);
    Real t = make_real(0.0, bits);
    Real norm2 = make_real(0.0, bits);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const Real yi = make_real(y[i], bits);
        t += yi * make_real(w.precise()[i], bits);
        norm2 += yi * yi;
    }
    const Real x = make_real(params.gamma, bits) * t;
    if (k_trunc < 0 || !tail_negligible(to_double(x), params.beta, k_trunc))
        throw ToleranceError("hclwe_density: k_trunc = " + std::to_string(k_trunc) +
                             " leaves more than 1e-12 of the layer sum");
    const Real pi = real_pi(bits);
    const Real b2 = make_real(params.beta, bits) * make_real(params.beta, bits);
    Real layers = make_real(0.0, bits);
    for (long k = -k_trunc; k <= k_trunc; ++k) {
        const Real d = k - x;
        layers += exp(-pi * d * d / b2);
    }
    return exp(-pi * norm2) * layers / hclwe_normalizer(params.beta, params.gamma, bits);
}

Real hclwe_density(std::span<const double> y, const ClweParams& params, const HiddenDirection& w) {
    return hclwe_density(y, params, w, hclwe_layer_cutoff(w.project(y), params.beta, params.gamma) + 1);
}

double TruncatedMixture::marginal(double t) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double d = (t - means[i]) / width;
        sum += weights[i] * std::exp(-std::numbers::pi * d * d);
    }
    return sum / width;
}

TruncatedMixture truncate_hclwe(const ClweParams& params, long k) {
    if (k < 0) throw ParameterError("truncate_hclwe: k must be >= 0");
    check_beta_gamma(params.beta, params.gamma);
    TruncatedMixture m;
    m.k = k;
    m.beta = params.beta;
    m.gamma = params.gamma;
    const double scale2 = params.beta * params.beta + params.gamma * params.gamma;
    m.width = params.layer_width();
    double total = 0.0;
    for (long j = -k; j <= k; ++j) {
        const double wj = std::exp(-std::numbers::pi * static_cast<double>(j * j) / scale2);
        m.weights.push_back(wj);
        m.means.push_back(params.gamma * static_cast<double>(j) / scale2);
        total += wj;
    }
    for (auto& wj : m.weights) wj /= total;
    m.tv_bound = 2.0 * std::exp(-std::numbers::pi * static_cast<double>(k * k) / scale2);
    return m;
}

nlohmann::json to_json(const TruncatedMixture& m) {
    return {{"k", m.k},         {"beta", m.beta},   {"gamma", m.gamma},      {"weights", m.weights},
            {"means", m.means}, {"width", m.width}, {"tv_bound", m.tv_bound}};
}

}  // namespace clwe::distributions

#include "clwe/distributions/samplers.hpp"

#include "clwe/error.hpp"
#include "clwe/lattice/discrete_gaussian.hpp"

#include <cmath>
#include <string>

namespace clwe::distributions {

namespace {

std::vector<double> standard_gaussian(std::size_t n, Rng& rng) {
    std::vector<double> y(n);
    for (auto& x : y) x = rng.gaussian(1.0);
    return y;
}

// Replaces the component of y along unit w by t.
void set_component(std::vector<double>& y, std::span<const double> w, double t) {
    double p = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) p += y[i] * w[i];
    const double d = t - p;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += d * w[i];
}

void check_dimension(const ClweParams& params, std::size_t n) {
    if (params.n != n) throw ParameterError("sampler: direction dimension does not match params.n");
}

}  // namespace

double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // x = -tiny rounds up to 1
    return r;
}

Real mod1(const Real& x) { return x - floor(x); }

ClweSample sample_clwe(const ClweParams& params, const HiddenDirection& w, Rng& rng) {
    check_dimension(params, w.dimension());
    ClweSample s;
    s.y = standard_gaussian(params.n, rng);
    const double e = params.beta > 0.0 ? rng.gaussian(params.beta) : 0.0;
    s.z = mod1(params.gamma * w.project(s.y) + e);
    return s;
}

PreciseClweSample sample_clwe_precise(const ClweParams& params, const HiddenDirection& w, Rng& rng,
                                      unsigned bits) {
    check_dimension(params, w.dimension());
    PrecisionScope scope(bits);
    const auto y = standard_gaussian(params.n, rng);
    PreciseClweSample s;
    s.y.resize(params.n);
    Real inner = make_real(0.0, bits);
    for (std::size_t i = 0; i < params.n; ++i) {
        s.y[i] = make_real(y[i], bits);
        inner += s.y[i] * make_real(w.precise()[i], bits);
    }
    Real x = make_real(params.gamma, bits) * inner;
    if (params.beta > 0.0) x += make_real(rng.gaussian(params.beta), bits);
    s.z = mod1(x);
    return s;
}

double sample_hidden_coordinate(double beta, double gamma, Rng& rng) {
    if (beta == 0.0) return static_cast<double>(lattice::sample_integer_gaussian(0.0, gamma, rng)) / gamma;
    const double scale2 = beta * beta + gamma * gamma;
    const long j = lattice::sample_integer_gaussian(0.0, std::sqrt(scale2), rng);
    return gamma * static_cast<double>(j) / scale2 + rng.gaussian(beta / std::sqrt(scale2));
}

HClweSample sample_hclwe(const ClweParams& params, const HiddenDirection& w, Rng& rng) {
    check_dimension(params, w.dimension());
    if (!(params.beta > 0.0)) throw ParameterError("sample_hclwe: beta must be > 0; use sample_hclwe_noiseless");
    HClweSample s;
    s.y = standard_gaussian(params.n, rng);
    set_component(s.y, w.w(), sample_hidden_coordinate(params.beta, params.gamma, rng));
    return s;
}

HClweSample sample_hclwe_noiseless(double gamma, const HiddenDirection& w, Rng& rng, long* layer) {
    if (!(gamma > 0.0)) throw ParameterError("sample_hclwe_noiseless: gamma must be > 0");
    HClweSample s;
    s.y = standard_gaussian(w.dimension(), rng);
    const long k = lattice::sample_integer_gaussian(0.0, gamma, rng);
    if (layer) *layer = k;
    set_component(s.y, w.w(), static_cast<double>(k) / gamma);
    return s;
}

HClweSample sample_hclwe_m(const ClweParams& params, const HiddenSubspace& w, Rng& rng) {
    if (params.n != w.dimension()) throw ParameterError("sample_hclwe_m: subspace dimension does not match params.n");
    HClweSample s = sample_null_gaussian(params.n, rng);
    if (w.rank() > 0 && !(params.beta > 0.0)) throw ParameterError("sample_hclwe_m: beta must be > 0");
    // Columns are orthonormal, so the sequential replacements commute.
    for (std::size_t j = 0; j < w.rank(); ++j)
        set_component(s.y, w.column(j), sample_hidden_coordinate(params.beta, params.gamma, rng));
    return s;
}

ClweSample sample_null_clwe(std::size_t n, Rng& rng) {
    ClweSample s;
    s.y = standard_gaussian(n, rng);
    s.z = rng.uniform();
    return s;
}

HClweSample sample_null_gaussian(std::size_t n, Rng& rng) { return {standard_gaussian(n, rng)}; }

std::string_view generator_name(Generator g) {
    switch (g) {
        case Generator::clwe: return "clwe";
        case Generator::hclwe: return "hclwe";
        case Generator::hclwe_noiseless: return "hclwe-noiseless";
        case Generator::null_clwe: return "null-clwe";
        case Generator::null_gaussian: return "null-gaussian";
    }
    return "unknown";
}

Generator parse_generator(std::string_view name) {
    for (auto g : {Generator::clwe, Generator::hclwe, Generator::hclwe_noiseless, Generator::null_clwe,
                   Generator::null_gaussian})
        if (generator_name(g) == name) return g;
    throw ConfigError("unknown generator '" + std::string(name) + "'");
}

bool generator_has_z(Generator g) { return g == Generator::clwe || g == Generator::null_clwe; }

SampleBatch generate_batch(Generator g, const ClweParams& params, const HiddenDirection& w, std::size_t count,
                           std::uint64_t seed) {
    check_dimension(params, w.dimension());
    BatchMetadata meta;
    meta.n = params.n;
    meta.beta = params.beta;
    meta.gamma = params.gamma;
    meta.seed = seed;
    meta.generator = std::string(generator_name(g));
    SampleBatch batch(std::move(meta), generator_has_z(g));
    batch.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        switch (g) {
            case Generator::clwe: batch.append(sample_clwe(params, w, rng)); break;
            case Generator::hclwe: batch.append(sample_hclwe(params, w, rng)); break;
            case Generator::hclwe_noiseless: batch.append(sample_hclwe_noiseless(params.gamma, w, rng)); break;
            case Generator::null_clwe: batch.append(sample_null_clwe(params.n, rng)); break;
            case Generator::null_gaussian: batch.append(sample_null_gaussian(params.n, rng)); break;
        }
    }
    batch.seal();
    return batch;
}

SampleBatch generate_precise_clwe_batch(const ClweParams& params, const HiddenDirection& w, std::size_t count,
                                        std::uint64_t seed, unsigned bits) {
    BatchMetadata meta;
    meta.n = params.n;
    meta.beta = params.beta;
    meta.gamma = params.gamma;
    meta.seed = seed;
    meta.generator = "clwe";
    meta.fidelity = Fidelity::decimal;
    meta.precision_bits = bits;
    SampleBatch batch(std::move(meta), true);
    batch.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) batch.append(sample_clwe_precise(params, w, rng, bits));
    batch.seal();
    return batch;
}

}  // namespace clwe::distributions

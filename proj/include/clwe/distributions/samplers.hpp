#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/harness/rng.hpp"

#include <cstdint>
#include <string_view>

namespace clwe::distributions {

// A_{w, beta, gamma}: y ~ D_{R^n}, z = (gamma <y, w> + e) mod 1, e ~ D_{beta}.
ClweSample sample_clwe(const ClweParams& params, const HiddenDirection& w, Rng& rng);

// Same law with y exact in binary and z reduced mod 1 at `bits` precision.
PreciseClweSample sample_clwe_precise(const ClweParams& params, const HiddenDirection& w, Rng& rng,
                                      unsigned bits);

// H_{w, beta, gamma} in mixture form: layer j ~ D_{Z, sqrt(beta^2+gamma^2)},
// hidden coordinate gamma j/(beta^2+gamma^2) + D_{beta/sqrt(beta^2+gamma^2)}.
// Requires beta > 0.
HClweSample sample_hclwe(const ClweParams& params, const HiddenDirection& w, Rng& rng);

// H_{w, gamma}: hidden coordinate from D_{(1/gamma) Z}. `layer` receives the
// integer k with <y, w> = k / gamma when non-null.
HClweSample sample_hclwe_noiseless(double gamma, const HiddenDirection& w, Rng& rng, long* layer = nullptr);

// m-direction hCLWE: independent hidden coordinates along every column of W.
// rank 0 is D_{R^n} itself.
HClweSample sample_hclwe_m(const ClweParams& params, const HiddenSubspace& w, Rng& rng);

// D_{R^n} x U and D_{R^n}.
ClweSample sample_null_clwe(std::size_t n, Rng& rng);
HClweSample sample_null_gaussian(std::size_t n, Rng& rng);

// Hidden coordinate of one hCLWE draw; beta = 0 gives the noiseless layer k/gamma.
double sample_hidden_coordinate(double beta, double gamma, Rng& rng);

// x mod 1 in [0, 1).
double mod1(double x);
Real mod1(const Real& x);

enum class Generator { clwe, hclwe, hclwe_noiseless, null_clwe, null_gaussian };

std::string_view generator_name(Generator g);
Generator parse_generator(std::string_view name);
bool generator_has_z(Generator g);

// `count` samples from the stream Rng(seed); sealed on return.
SampleBatch generate_batch(Generator g, const ClweParams& params, const HiddenDirection& w, std::size_t count,
                           std::uint64_t seed);

// Solver-precision CLWE batch (decimal fidelity).
SampleBatch generate_precise_clwe_batch(const ClweParams& params, const HiddenDirection& w, std::size_t count,
                                        std::uint64_t seed, unsigned bits);

}  // namespace clwe::distributions

#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/lattice/lll.hpp"
#include "clwe/numerics/real.hpp"

#include "json.hpp"

#include <vector>

namespace clwe::solvers {

struct NoiselessSolveConfig {
    double tolerance = 1e-6;
    // 0 picks max(batch precision, 8 n^2).
    unsigned precision_bits = 0;
    // LLL reruns at doubled precision when the short-vector bound fails.
    unsigned max_escalations = 2;
};

// gamma <y, w> = z over the reals, from one LLL run on n + 1 samples.
struct HarvestedEquation {
    Vector<Real> y;
    Real z;                                     // representative in (-1/2, 1/2]
    std::vector<lattice::Integer> coefficients;  // integer combination of the n + 1 samples
    double short_norm = 0.0;                    // norm of the reduced lattice vector, delta row included
};

struct NoiselessSolveReport {
    std::vector<double> recovered_direction;
    Vector<Real> recovered_precise;
    std::vector<HarvestedEquation> equations_used;
    // max |gamma <y, w_hat> - z| over the harvested equations.
    double residual = 0.0;
    // max distance of gamma <y_i, w_hat> - z_i to Z over every consumed sample.
    double sample_residual = 0.0;
    double norm_before_normalization = 0.0;
    std::size_t trials = 0;
    std::size_t samples_consumed = 0;
    std::size_t escalations = 0;
    unsigned precision_bits = 0;
    bool success = false;
};

// Noiseless CLWE by lattice reduction: for n rounds, LLL-reduce the columns of
//   Y = [y_1 ... y_n y_{n+1}; 0 ... 0 delta],  delta = 2^{-3 n^2},
// read the integer combination of the first reduced vector and keep the
// equation gamma <sum c_i y_i, w> = sum c_i z_i (mod 1 representative), then
// solve the n x n system. Samples are used in an rng-shuffled order; groups
// whose y's are numerically dependent are skipped.
// Throws SingularMatrixError or PrecisionError when the batch runs out
// before n usable equations are found.
NoiselessSolveReport solve_noiseless_clwe(const distributions::SampleBatch& samples, double gamma, std::size_t n,
                                          Rng& rng, const NoiselessSolveConfig& cfg = {});

// max_i |a_i - s b_i| <= tol for s = +1 or s = -1.
bool matches_up_to_sign(const std::vector<double>& a, const std::vector<double>& b, double tol);

nlohmann::json to_json(const NoiselessSolveReport& r);

}  // namespace clwe::solvers

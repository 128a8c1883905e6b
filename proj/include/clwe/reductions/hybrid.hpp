#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/reductions/rotation.hpp"

namespace clwe::reductions {

// Lifts a batch in dimension n' = n - m + 1 to dimension n: appends i
// coordinates from H_{I_i, beta, gamma} (independent hCLWE coordinates) and
// m - 1 - i standard Gaussian coordinates, then applies a uniform random
// rotation. hCLWE input yields hCLWE^(i+1), null input yields hCLWE^(i).
// params.n is the target dimension n.
RotatedBatch embed_hybrid(const distributions::SampleBatch& batch, std::size_t i, std::size_t m,
                          const distributions::ClweParams& params, Rng& rng);

// Same construction with a caller-chosen rotation.
RotatedBatch embed_hybrid(const distributions::SampleBatch& batch, std::size_t i, std::size_t m,
                          const distributions::ClweParams& params, const Matrix<double>& rotation, Rng& rng);

}  // namespace clwe::reductions

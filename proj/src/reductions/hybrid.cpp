#include "clwe/reductions/hybrid.hpp"

#include "clwe/distributions/samplers.hpp"
#include "clwe/error.hpp"

#include <string>

namespace clwe::reductions {

RotatedBatch embed_hybrid(const distributions::SampleBatch& batch, std::size_t i, std::size_t m,
                          const distributions::ClweParams& params, const Matrix<double>& rotation, Rng& rng) {
    const std::size_t n = params.n;
    if (m == 0) throw ParameterError("hybrid: m must be >= 1");
    if (i + 1 > m) throw ParameterError("hybrid: index i must satisfy 0 <= i <= m - 1");
    if (batch.dimension() + m - 1 != n)
        throw ParameterError("hybrid: input dimension " + std::to_string(batch.dimension()) + " + m - 1 != " +
                             std::to_string(n));
    if (batch.has_z()) throw ParameterError("hybrid: input must be a homogeneous (y-only) batch");
    if (i > 0 && !(params.beta > 0.0)) throw ParameterError("hybrid: beta must be > 0");
    if (!rotation.square() || rotation.rows() != n) throw ParameterError("hybrid: rotation has wrong size");

    auto meta = batch.metadata();
    meta.n = n;
    meta.beta = params.beta;
    meta.gamma = params.gamma;
    meta.fidelity = distributions::Fidelity::float64;
    meta.generator += "+hybrid" + std::to_string(i);
    distributions::SampleBatch out(std::move(meta), false);
    out.reserve(batch.size());
    std::vector<double> y(n);
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const auto row = batch.y(k);
        std::copy(row.begin(), row.end(), y.begin());
        std::size_t j = row.size();
        for (std::size_t a = 0; a < i; ++a) y[j++] = distributions::sample_hidden_coordinate(params.beta, params.gamma, rng);
        for (std::size_t a = i; a + 1 < m; ++a) y[j++] = rng.gaussian(1.0);
        out.append(rotate(rotation, y));
    }
    out.seal();
    return {std::move(out), rotation};
}

RotatedBatch embed_hybrid(const distributions::SampleBatch& batch, std::size_t i, std::size_t m,
                          const distributions::ClweParams& params, Rng& rng) {
    const auto r = random_rotation(params.n, rng);
    return embed_hybrid(batch, i, m, params, r, rng);
}

}  // namespace clwe::reductions

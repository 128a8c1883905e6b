#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/distributions/params.hpp"
#include "clwe/harness/rng.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace clwe::reductions {

struct RejectionConfig {
    double delta = 0.1;  // window width in (0, 1)
    std::uint64_t max_attempts_per_sample = 100'000;

    void validate() const;
};

// g_0(z) = sum_k rho_delta(z + k), summed over |k| <= 8 around z; the omitted
// tail is below 1e-15 for delta < 1.
double window_mass(double z, double delta);

struct RejectionStats {
    std::uint64_t attempts = 0;
    std::uint64_t accepted = 0;
    std::uint64_t max_attempts_for_one = 0;
    double rate() const { return attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0; }
};

nlohmann::json to_json(const RejectionStats& s);

// Accepts (y, z) with probability g_0(z)/M, M = g_0(0) = sup g_0. On
// A_{w, beta, gamma} input the accepted y follow H_{w, sqrt(beta^2+delta^2), gamma}.
class RejectionSampler {
public:
    explicit RejectionSampler(RejectionConfig cfg);

    std::optional<distributions::HClweSample> offer(const distributions::ClweSample& s, Rng& rng);
    double acceptance_probability(double z) const;

    const RejectionConfig& config() const { return cfg_; }
    const RejectionStats& stats() const { return stats_; }
    double sup() const { return m_; }

private:
    RejectionConfig cfg_;
    double m_;
    RejectionStats stats_;
    std::uint64_t since_last_ = 0;
};

// Parameters of the output distribution.
distributions::ClweParams rejection_output_params(const distributions::ClweParams& input, double delta);

struct RejectionResult {
    distributions::SampleBatch batch;
    RejectionStats stats;
};

using ClweSource = std::function<distributions::ClweSample(Rng&)>;

// Draws from `source` until `count` samples are accepted. Throws BudgetError
// if any single output needs more than max_attempts_per_sample draws.
RejectionResult clwe_to_hclwe_rejection(const ClweSource& source, std::size_t count, const RejectionConfig& cfg,
                                        Rng& rng, distributions::BatchMetadata meta);

// Runs over a finished CLWE batch; returns however many were accepted.
RejectionResult clwe_to_hclwe_rejection(const distributions::SampleBatch& input, const RejectionConfig& cfg,
                                        Rng& rng);

}  // namespace clwe::reductions

#include "clwe/reductions/rejection.hpp"

#include "clwe/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace clwe::reductions {

void RejectionConfig::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("rejection: delta must lie in (0, 1)");
    if (max_attempts_per_sample == 0) throw ParameterError("rejection: max_attempts_per_sample must be positive");
}

double window_mass(double z, double delta) {
    const double base = z - std::floor(z);
    double sum = 0.0;
    for (int k = -9; k <= 8; ++k) {
        const double d = (base + k) / delta;
        sum += std::exp(-std::numbers::pi * d * d);
    }
    return sum;
}

nlohmann::json to_json(const RejectionStats& s) {
    return {{"attempts", s.attempts},
            {"accepted", s.accepted},
            {"rate", s.rate()},
            {"max_attempts_for_one", s.max_attempts_for_one}};
}

RejectionSampler::RejectionSampler(RejectionConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    m_ = window_mass(0.0, cfg_.delta);
}

double RejectionSampler::acceptance_probability(double z) const {
    return std::min(1.0, window_mass(z, cfg_.delta) / m_);
}

std::optional<distributions::HClweSample> RejectionSampler::offer(const distributions::ClweSample& s, Rng& rng) {
    ++stats_.attempts;
    ++since_last_;
    stats_.max_attempts_for_one = std::max(stats_.max_attempts_for_one, since_last_);
    if (since_last_ > cfg_.max_attempts_per_sample)
        throw BudgetError("rejection: no acceptance within " + std::to_string(cfg_.max_attempts_per_sample) +
                          " attempts; the window delta is too narrow for this source");
    if (rng.uniform() >= acceptance_probability(s.z)) return std::nullopt;
    ++stats_.accepted;
    since_last_ = 0;
    return distributions::HClweSample{s.y};
}

distributions::ClweParams rejection_output_params(const distributions::ClweParams& input, double delta) {
    return distributions::ClweParams(input.n, std::hypot(input.beta, delta), input.gamma, input.ratio_bound);
}

RejectionResult clwe_to_hclwe_rejection(const ClweSource& source, std::size_t count, const RejectionConfig& cfg,
                                        Rng& rng, distributions::BatchMetadata meta) {
    RejectionSampler sampler(cfg);
    meta.beta = std::hypot(meta.beta, cfg.delta);
    meta.generator += "+rejection";
    meta.fidelity = distributions::Fidelity::float64;
    distributions::SampleBatch out(std::move(meta), false);
    out.reserve(count);
    while (out.size() < count)
        if (auto s = sampler.offer(source(rng), rng)) out.append(*s);
    out.seal();
    return {std::move(out), sampler.stats()};
}

RejectionResult clwe_to_hclwe_rejection(const distributions::SampleBatch& input, const RejectionConfig& cfg,
                                        Rng& rng) {
    if (!input.has_z()) throw ParameterError("rejection: input batch has no z column");
    RejectionSampler sampler(cfg);
    auto meta = input.metadata();
    meta.beta = std::hypot(meta.beta, cfg.delta);
    meta.generator += "+rejection";
    meta.fidelity = distributions::Fidelity::float64;
    distributions::SampleBatch out(std::move(meta), false);
    for (std::size_t i = 0; i < input.size(); ++i) {
        const auto row = input.y(i);
        distributions::ClweSample s{std::vector<double>(row.begin(), row.end()), input.z(i)};
        if (auto a = sampler.offer(s, rng)) out.append(*a);
    }
    out.seal();
    return {std::move(out), sampler.stats()};
}

}  // namespace clwe::reductions
